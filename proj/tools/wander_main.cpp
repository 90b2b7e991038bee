// Command-line front end: every pipeline stage with reproducible,
// file-based inputs and outputs.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "CLI11.hpp"
#include "wander/ay.hpp"
#include "wander/emit.hpp"
#include "wander/wandering.hpp"

namespace fs = std::filesystem;
using namespace wander;

namespace {

struct RunConfig {
  double theta = 0.0;  // gamma = e^{i theta} Gamma; the only randomness source
  int depth_cloud = 14;
  int depth_boundary = 6;
  int depth_verify = 12;
  int window_exponent = 26;
  int psi_grid = 256;
  long N = 5000;
  double tol = 1e-9;
  std::string out_dir = "out";

  Json to_json() const {
    Json j;
    j["theta"] = fmt17(theta);
    j["depth_cloud"] = depth_cloud;
    j["depth_boundary"] = depth_boundary;
    j["depth_verify"] = depth_verify;
    j["window_exponent"] = window_exponent;
    j["psi_grid"] = psi_grid;
    j["N"] = N;
    j["tol"] = fmt17(tol);
    j["out_dir"] = out_dir;
    return j;
  }
  static RunConfig from_json(const Json& j) {
    RunConfig c;
    if (j.contains("theta")) c.theta = std::stod(j["theta"].get<std::string>());
    if (j.contains("depth_cloud")) c.depth_cloud = j["depth_cloud"].get<int>();
    if (j.contains("depth_boundary")) c.depth_boundary = j["depth_boundary"].get<int>();
    if (j.contains("depth_verify")) c.depth_verify = j["depth_verify"].get<int>();
    if (j.contains("window_exponent")) c.window_exponent = j["window_exponent"].get<int>();
    if (j.contains("psi_grid")) c.psi_grid = j["psi_grid"].get<int>();
    if (j.contains("N")) c.N = j["N"].get<long>();
    if (j.contains("tol")) c.tol = std::stod(j["tol"].get<std::string>());
    if (j.contains("out_dir")) c.out_dir = j["out_dir"].get<std::string>();
    if (!(c.tol > 0)) throw std::invalid_argument("config: tol must be positive");
    return c;
  }
};

RunConfig load_config(const std::string& path) {
  if (path.empty()) return {};
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read config " + path);
  Json j;
  is >> j;
  return RunConfig::from_json(j);
}

int cmd_render_fractal(const RunConfig& cfg, int letter, int depth) {
  FractalContext ctx = ay_context(cfg.theta);
  FractalCloud cl = cloud(ctx, letter - 1, depth);
  std::vector<Complex> pts;
  std::vector<std::string> tags;
  for (const auto& p : cl.pts) {
    pts.push_back(p.z);
    tags.push_back(path_from_choices(ctx, cl.a, p.choices).str(ctx.sigma.alphabet()));
  }
  fs::path dir(cfg.out_dir);
  write_cloud_csv(dir / ("fractal_" + std::to_string(letter) + ".csv"), pts, tags);
  SvgPlot plot;
  BoundaryCurve curve = boundary_curve(letter - 1);
  auto lines = curve.polylines(cfg.depth_boundary);
  plot.fit(pts);
  for (const auto& l : lines) plot.fit(l);
  plot.add_points(pts, "#1f3d7a", 1.0);
  for (const auto& l : lines) plot.add_polyline(l, "#c03020", 1.2);
  plot.write(dir / ("fractal_" + std::to_string(letter) + ".svg"));
  std::printf("fractal %d: %zu points at depth %d\n", letter, pts.size(), depth);
  return 0;
}

int cmd_extreme_points(const RunConfig& cfg, int letter, int depth, int grid) {
  FractalContext ctx = ay_context(cfg.theta);
  Json arr = Json::array();
  bool mono_ok = true;
  for (int g = 0; g < grid; ++g) {
    double th = 2 * M_PI * g / grid;
    Complex tau(std::cos(th), std::sin(th));
    ExtremeReport rep = v_min(ctx, letter - 1, depth, tau);
    arr.push_back(rep.to_json(ctx));
    if (rep.v > 0) mono_ok = false;
  }
  write_json(fs::path(cfg.out_dir) / ("extreme_" + std::to_string(letter) + ".json"), arr);
  std::printf("extreme points: letter %d, %d directions, depth %d\n", letter, grid, depth);
  return mono_ok ? 0 : 1;
}

int cmd_psi_scan(const RunConfig& cfg, int letter, int depth, int grid, double gap_tol) {
  FractalContext ctx = ay_context(cfg.theta);
  auto cands = psi_scan(ctx, letter - 1, grid, depth, gap_tol);
  Json arr = Json::array();
  for (const auto& c : cands) {
    Json j;
    j["theta"] = fmt17(c.theta);
    j["labels"] = {c.label1, c.label2};
    j["gap"] = fmt17(c.gap);
    j["separation_D"] = fmt17(c.separation);
    arr.push_back(j);
  }
  write_json(fs::path(cfg.out_dir) / ("psi_" + std::to_string(letter) + ".json"), arr);
  std::printf("psi scan: letter %d, %zu candidate directions\n", letter, cands.size());
  return 0;
}

struct WindowBundle {
  MinimalWindow mw;
  MinimalityVerdict verdict;
  GrowthReport growth;
  SeedLetters seed;
};

WindowBundle make_window(const RunConfig& cfg) {
  const AyConstants& ay = AyConstants::get();
  FractalContext ctx = ay_context(cfg.theta);
  WindowBundle b;
  b.seed = find_seed_letters(ctx.sigma, ctx.gamma);
  b.mw = minimal_window(ctx.sigma, ctx.gamma, b.seed, cfg.window_exponent, ctx.beta);
  b.verdict = verify_minimality(b.mw.window, ctx.gamma);
  b.growth = growth_check(b.mw.window, ctx.gamma, 0.4, ay.alpha, ctx.beta);
  return b;
}

Json window_sidecar(const RunConfig& cfg, const WindowBundle& b, const Alphabet& alpha) {
  Json j;
  j["seed"] = word_str(alpha, b.mw.seed);
  j["n"] = b.mw.exponent;
  j["split"] = b.mw.split;
  j["theta"] = fmt17(cfg.theta);
  j["length"] = b.mw.window.symbols.size();
  j["minimality_ok"] = b.verdict.ok;
  j["worst_value"] = fmt17(b.verdict.worst_value);
  j["worst_n"] = b.verdict.worst_n;
  j["growth_rho"] = fmt17(b.growth.rho);
  j["growth_min_ratio"] = fmt17(b.growth.min_ratio);
  j["growth_argmin"] = b.growth.argmin;
  j["rho_max"] = fmt17(b.growth.rho_max);
  return j;
}

int cmd_minimal_window(const RunConfig& cfg) {
  const AyConstants& ay = AyConstants::get();
  WindowBundle b = make_window(cfg);
  // central view: full windows can be tens of millions of symbols
  const long view = 10000;
  long lo = std::max(b.mw.window.min_index(), -view);
  long hi = std::min(b.mw.window.max_index(), view);
  std::string line;
  for (long n = lo; n <= hi; ++n) {
    if (n == 0) line += "\xc2\xb7";  // the origin dot
    line += ay.letters.names[static_cast<size_t>(b.mw.window.at(n))];
  }
  line += "\n";
  fs::path dir(cfg.out_dir);
  write_text(dir / "window.txt", line);
  Json sc = window_sidecar(cfg, b, ay.letters);
  sc["view"] = {lo, hi};
  write_json(dir / "window.json", sc);
  std::printf("minimal window: %zu symbols, split %ld, growth min %.6f\n", b.mw.window.symbols.size(), b.mw.split,
              b.growth.min_ratio);
  return b.verdict.ok && b.growth.min_ratio > 0 ? 0 : 1;
}

int cmd_build_affine(const RunConfig& cfg) {
  const AyConstants& ay = AyConstants::get();
  FractalContext ctx = ay_context(cfg.theta);
  WindowBundle b = make_window(cfg);
  AtomicMeasure mu = build_measure(ay.T, ay.partition, b.mw, ctx.gamma, cfg.N);
  ConjugacyPair conj = build_conjugacy(mu);
  SynthesisResult syn = synthesize_affine(ay.T, mu, conj, ctx.gamma);
  WanderingReport wr = verify_wandering(syn.f, ay.T, conj, 500);
  std::vector<double> ell;
  for (const auto& g : ctx.gamma) ell.push_back(std::exp(-g.real()));
  double ortho = slope_orthogonality(ell, ay.lambda);

  fs::path dir(cfg.out_dir);
  write_json(dir / "affine.json", syn.f.to_json());
  Json j;
  j["window"] = window_sidecar(cfg, b, ay.letters);
  j["K"] = fmt17(mu.K);
  j["N"] = cfg.N;
  j["atom_block"] = {mu.n_lo, mu.n_hi};
  j["base_point"] = fmt17(mu.base);
  j["max_slope_rel_err"] = fmt17(syn.max_slope_rel_err);
  j["semi_conjugacy_residual"] = fmt17(syn.semi_conjugacy_residual);
  j["slope_orthogonality"] = fmt17(ortho);
  j["conditioning"] = Json{{"smallest_gap", fmt17(syn.smallest_gap)},
                           {"smallest_slope", fmt17(syn.smallest_slope)},
                           {"largest_slope", fmt17(syn.largest_slope)}};
  j["wandering"] = Json{{"n_orbit", wr.n_orbit},
                        {"disjoint", wr.disjoint},
                        {"total_length", fmt17(wr.total_length)},
                        {"collapse_residual", fmt17(wr.max_collapse_residual)},
                        {"length_residual", fmt17(wr.max_length_residual)},
                        {"pass", wr.pass}};
  write_json(dir / "wandering.json", j);

  // gap-orbit visualization: the first 60 iterates of the largest gap
  {
    SvgPlot plot;
    std::vector<Complex> box{{0, 0}, {1, 0.12}};
    plot.fit(box);
    long m = static_cast<long>(conj.q.size());
    long r0 = 0;
    for (long r = 0; r < m; ++r)
      if (conj.q[static_cast<size_t>(r)] > conj.q[static_cast<size_t>(r0)]) r0 = r;
    double lo = conj.cum[static_cast<size_t>(r0)], hi = lo + conj.q[static_cast<size_t>(r0)];
    for (int k = 0; k < 60; ++k) {
      double y = 0.002 * k;
      plot.add_polyline({{lo, 0.01 + y}, {hi, 0.01 + y}}, "#1f3d7a", 1.5);
      double mid = 0.5 * (lo + hi);
      const AffinePiece* piece = nullptr;
      for (const auto& p : syn.f.pieces)
        if (mid >= p.lo && mid < p.hi) piece = &p;
      if (!piece) break;
      double nl = piece->slope * lo + piece->intercept, nh = piece->slope * hi + piece->intercept;
      lo = nl;
      hi = nh;
    }
    plot.write(dir / "gap_orbit.svg");
  }
  bool pass = syn.max_slope_rel_err <= 1e-6 && syn.semi_conjugacy_residual <= 1e-9 && ortho <= 1e-10 && wr.pass;
  std::printf("build-affine: slopes rel err %.2e, semiconj %.2e, <log l,lambda> %.2e, wandering %s\n",
              syn.max_slope_rel_err, syn.semi_conjugacy_residual, ortho, wr.pass ? "ok" : "FAIL");
  return pass ? 0 : 1;
}

int cmd_verify_ifs(const RunConfig& cfg, int depth) {
  IfsReport rep = verify_ifs(depth, cfg.tol);
  write_json(fs::path(cfg.out_dir) / "ifs.json", rep.to_json());
  std::printf("verify-ifs: depth %d, max residual %.3e, bound %.3e -> %s\n", depth,
              *std::max_element(rep.residual.begin(), rep.residual.end()), rep.bound, rep.pass ? "ok" : "FAIL");
  return rep.pass ? 0 : 1;
}

int cmd_verify_urp(const RunConfig& cfg) {
  UrpReport rep = verify_urp_witnesses();
  const AyConstants& ay = AyConstants::get();
  write_json(fs::path(cfg.out_dir) / "urp.json", rep.to_json(ay.letters));
  std::printf("case letter  exact  dist(sub0)  dist(sub1)  value\n");
  for (const auto& r : rep.rows)
    std::printf("%4d %6d  %5s  %.3e  %.3e  %s\n", r.case_id, r.a + 1, r.exact_match ? "yes" : "NO", r.dist_sub[0],
                r.dist_sub[1], r.value.str().c_str());
  return rep.all_exact && rep.all_within ? 0 : 1;
}

int cmd_verify_boundary(const RunConfig& cfg, int depth) {
  BoundaryLemmasReport rep = verify_boundary_lemmas(depth);
  write_json(fs::path(cfg.out_dir) / "boundary.json", rep.to_json());
  std::printf("verify-boundary: separations %.3f/%.3f/%.3f, rauzy2 clusters %d -> %s\n", rep.sep_basic[0],
              rep.sep_basic[1], rep.sep_basic[2], rep.rauzy2_clusters, rep.pass ? "ok" : "FAIL");
  return rep.pass ? 0 : 1;
}

int cmd_iem(const std::string& file, double cut, double tol) {
  std::ifstream is(file);
  if (!is) throw std::invalid_argument("cannot read IEM file " + file);
  Json j;
  is >> j;
  Iem T = Iem::from_json(j);
  std::printf("interval exchange on [0,%.17g) with %d letters\n", T.total(), T.size());
  for (int a = 0; a < T.size(); ++a)
    std::printf("  %-4s len %.17g  delta %+.17g\n", T.alphabet.names[static_cast<size_t>(a)].c_str(),
                T.lengths[static_cast<size_t>(a)], T.delta[static_cast<size_t>(a)]);
  if (cut > 0) {
    SelfSimilarityReport rep = self_similarity_check(T, cut, 4096, tol);
    std::printf("self-similarity at cut %.17g: %s (max residual %.3e)\n", cut,
                rep.is_scaled_copy ? "scaled copy" : "no", rep.max_residual);
    if (rep.is_scaled_copy && rep.sigma) {
      std::printf("  substitution:");
      for (int a = 0; a < T.size(); ++a)
        std::printf(" %s->%s", T.alphabet.names[static_cast<size_t>(a)].c_str(),
                    word_str(T.alphabet, rep.sigma->image(a)).c_str());
      std::printf("\n  R = M^t verified\n");
    }
    return rep.is_scaled_copy ? 0 : 1;
  }
  return 0;
}

int cmd_report(const RunConfig& cfg) {
  const AyConstants& ay = AyConstants::get();
  fs::path dir(cfg.out_dir);
  Json report;
  report["config"] = cfg.to_json();
  report["config"].erase("out_dir");  // where the files land is not part of the certificate
  bool all = true;

  {
    IfsReport rep = verify_ifs(cfg.depth_verify, cfg.tol);
    report["ifs"] = rep.to_json();
    all = all && rep.pass;
  }
  {
    UrpReport rep = verify_urp_witnesses();
    report["urp"] = rep.to_json(ay.letters);
    all = all && rep.all_exact && rep.all_within;
  }
  {
    BoundaryLemmasReport rep = verify_boundary_lemmas(16);
    report["boundary"] = rep.to_json();
    all = all && rep.pass;
  }
  {
    WindowBundle b = make_window(cfg);
    report["window"] = window_sidecar(cfg, b, ay.letters);
    all = all && b.verdict.ok && b.growth.min_ratio > 0;

    FractalContext ctx = ay_context(cfg.theta);
    AtomicMeasure mu = build_measure(ay.T, ay.partition, b.mw, ctx.gamma, cfg.N);
    ConjugacyPair conj = build_conjugacy(mu);
    SynthesisResult syn = synthesize_affine(ay.T, mu, conj, ctx.gamma);
    WanderingReport wr = verify_wandering(syn.f, ay.T, conj, 500);
    std::vector<double> ell;
    for (const auto& g : ctx.gamma) ell.push_back(std::exp(-g.real()));
    double ortho = slope_orthogonality(ell, ay.lambda);
    Json jw;
    jw["K"] = fmt17(mu.K);
    jw["max_slope_rel_err"] = fmt17(syn.max_slope_rel_err);
    jw["semi_conjugacy_residual"] = fmt17(syn.semi_conjugacy_residual);
    jw["slope_orthogonality"] = fmt17(ortho);
    jw["wandering_disjoint"] = wr.disjoint;
    jw["wandering_total_length"] = fmt17(wr.total_length);
    report["affine"] = jw;
    all = all && syn.max_slope_rel_err <= 1e-6 && syn.semi_conjugacy_residual <= 1e-9 && ortho <= 1e-10 && wr.pass;

    // good-eigenvector liminf certificate over the Psi candidates of letter 1;
    // the candidates are computed in the rotated frame already, so no extra
    // rotation is applied here
    auto cands = psi_scan(ctx, 0, cfg.psi_grid, std::min(cfg.depth_verify, 12));
    std::vector<double> thetas;
    for (const auto& c : cands) thetas.push_back(c.theta);
    double afac[3] = {1.05, 1.2, std::abs(ctx.beta)};
    auto rows = good_direction_certificate(thetas, ctx.beta, 0.0, 2000, afac);
    Json jg = Json::array();
    for (const auto& r : rows)
      jg.push_back(Json{{"A", fmt17(r.a_factor)},
                        {"theta", fmt17(r.theta)},
                        {"min_scaled", fmt17(r.min_scaled)},
                        {"argmin_k", r.argmin_k}});
    report["good_direction"] = jg;
  }
  report["all_pass"] = all;
  write_json(dir / "report.json", report);

  std::string summary;
  summary += "wander report\n";
  summary += "  ifs residual bound ok: " + std::string(report["ifs"]["pass"].get<bool>() ? "yes" : "no") + "\n";
  summary += "  urp witnesses exact:   " + std::string(report["urp"]["all_exact"].get<bool>() ? "yes" : "no") + "\n";
  summary += "  boundary lemmas ok:    " + std::string(report["boundary"]["pass"].get<bool>() ? "yes" : "no") + "\n";
  summary += "  window minimal:        " + std::string(report["window"]["minimality_ok"].get<bool>() ? "yes" : "no") + "\n";
  summary += "  growth min ratio:      " + report["window"]["growth_min_ratio"].get<std::string>() + "\n";
  summary += "  affine slopes rel err: " + report["affine"]["max_slope_rel_err"].get<std::string>() + "\n";
  summary += "  all pass:              " + std::string(all ? "yes" : "no") + "\n";
  write_text(dir / "report.txt", summary);
  std::fputs(summary.c_str(), stdout);
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"self-similar interval exchange maps, substitution fractals and wandering intervals"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file");

  int letter = 1, depth = -1, grid = -1;
  double gap_tol = 1e-7;
  bool theta_set = false, n_set = false, out_set = false, tol_set = false;
  double theta = 0;
  long bigN = 5000;
  std::string out;
  double tol = 1e-9;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--theta", theta, "seed angle for gamma = e^{i theta} Gamma")->each([&](std::string) { theta_set = true; });
    sub->add_option("--N", bigN, "measure truncation")->each([&](std::string) { n_set = true; });
    sub->add_option("--out", out, "output directory")->each([&](std::string) { out_set = true; });
    sub->add_option("--tol", tol, "tolerance")->each([&](std::string) { tol_set = true; });
  };

  CLI::App* render = app.add_subcommand("render-fractal", "emit CSV + SVG of one fractal");
  render->add_option("--letter", letter, "letter 1..9")->required();
  render->add_option("--depth", depth, "cloud depth");
  add_common(render);

  CLI::App* extreme = app.add_subcommand("extreme-points", "directional minima over a grid");
  extreme->add_option("--letter", letter)->required();
  extreme->add_option("--depth", depth);
  extreme->add_option("--grid", grid);
  add_common(extreme);

  CLI::App* psi = app.add_subcommand("psi-scan", "directions with extreme points in two subfractals");
  psi->add_option("--letter", letter)->required();
  psi->add_option("--depth", depth);
  psi->add_option("--grid", grid);
  psi->add_option("--gap-tol", gap_tol);
  add_common(psi);

  CLI::App* window = app.add_subcommand("minimal-window", "build and certify a minimal window");
  window->add_option("--n", depth, "substitution exponent");
  add_common(window);

  CLI::App* affine = app.add_subcommand("build-affine", "synthesize the affine extension and verify");
  add_common(affine);

  CLI::App* ifs = app.add_subcommand("verify-ifs", "graph-directed equations of the fractals");
  ifs->add_option("--depth", depth);
  add_common(ifs);

  CLI::App* urp = app.add_subcommand("verify-urp", "witness table of the boundary-representation lemma");
  add_common(urp);

  CLI::App* boundary = app.add_subcommand("verify-boundary", "tribonacci boundary lemmas");
  boundary->add_option("--depth", depth);
  add_common(boundary);

  CLI::App* report = app.add_subcommand("report", "run all verifications and aggregate certificates");
  add_common(report);

  std::string iem_file;
  double iem_cut = -1;
  CLI::App* iemcmd = app.add_subcommand("iem", "inspect an interval exchange from its JSON file");
  iemcmd->add_option("--file", iem_file, "IEM JSON ({alphabet, lambda, pi0, pi1})")->required();
  iemcmd->add_option("--cut", iem_cut, "probe self-similarity at this cut");
  add_common(iemcmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (letter < 1 || letter > 9) throw std::invalid_argument("--letter must be in 1..9");
    RunConfig cfg = load_config(config_path);
    if (theta_set) cfg.theta = theta;
    if (n_set) cfg.N = bigN;
    if (out_set) cfg.out_dir = out;
    if (tol_set) cfg.tol = tol;

    if (render->parsed()) return cmd_render_fractal(cfg, letter, depth > 0 ? depth : cfg.depth_cloud);
    if (extreme->parsed())
      return cmd_extreme_points(cfg, letter, depth > 0 ? depth : cfg.depth_cloud, grid > 0 ? grid : 64);
    if (psi->parsed())
      return cmd_psi_scan(cfg, letter, depth > 0 ? depth : cfg.depth_verify, grid > 0 ? grid : cfg.psi_grid, gap_tol);
    if (window->parsed()) {
      if (depth > 0) cfg.window_exponent = depth;
      return cmd_minimal_window(cfg);
    }
    if (affine->parsed()) return cmd_build_affine(cfg);
    if (ifs->parsed()) return cmd_verify_ifs(cfg, depth > 0 ? depth : cfg.depth_verify);
    if (urp->parsed()) return cmd_verify_urp(cfg);
    if (boundary->parsed()) return cmd_verify_boundary(cfg, depth > 0 ? depth : 18);
    if (report->parsed()) return cmd_report(cfg);
    if (iemcmd->parsed()) return cmd_iem(iem_file, iem_cut, cfg.tol);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    Json diag;
    diag["error"] = e.what();
    std::fprintf(stderr, "%s\n", diag.dump().c_str());
    return 1;
  }
  return 2;
}
