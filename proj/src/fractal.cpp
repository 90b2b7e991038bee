#include "wander/fractal.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

namespace wander {

namespace {

// canonical dedup key at 1e-12 resolution
std::pair<long long, long long> grid_key(Complex z) {
  return {llround(z.real() * 1e12), llround(z.imag() * 1e12)};
}

}  // namespace

FractalContext::FractalContext(Substitution s, std::vector<Complex> g, Complex b)
    : sigma(std::move(s)), gamma(std::move(g)), beta(b) {
  abs_beta = std::abs(beta);
  if (abs_beta <= 1.0) throw std::invalid_argument("FractalContext: |beta| must exceed 1");
  beta0 = beta / abs_beta;
  ibeta = 1.0 / beta;
  decs.resize(static_cast<size_t>(sigma.size()));
  for (Letter a = 0; a < sigma.size(); ++a) {
    for (const PssTriple& t : enumerate_decompositions(sigma, a)) {
      Dec d;
      d.p = t.p;
      d.c = t.c;
      d.s = t.s;
      d.gamma_p = gamma_weight(t.p, gamma);
      gmax = std::max(gmax, std::abs(d.gamma_p));
      decs[static_cast<size_t>(a)].push_back(std::move(d));
    }
  }
  ibp.resize(kMaxFractalDepth + 1);
  ibp[0] = 1.0;
  for (int m = 1; m <= kMaxFractalDepth; ++m) ibp[static_cast<size_t>(m)] = ibp[static_cast<size_t>(m - 1)] * ibeta;
}

Complex value_of_path(const FractalContext& ctx, const PssPath& path) {
  Complex finite = 0;
  int n0 = path.eventually_periodic() ? path.preperiod : static_cast<int>(path.triples.size());
  for (int m = 0; m < n0; ++m)
    finite += ctx.ibp[static_cast<size_t>(m + 1)] * gamma_weight(path.triples[static_cast<size_t>(m)].p, ctx.gamma);
  if (!path.eventually_periodic()) return finite;
  int q = path.period;
  Complex block = 0;
  for (int j = 0; j < q; ++j)
    block += ctx.ibp[static_cast<size_t>(j + 1)] *
             gamma_weight(path.triples[static_cast<size_t>(path.preperiod + j)].p, ctx.gamma);
  Complex ibq = ctx.ibp[static_cast<size_t>(q)];
  return finite + ctx.ibp[static_cast<size_t>(n0)] * block / (1.0 - ibq);
}

CubicNumber value_of_path_exact(const Substitution& sigma, std::span<const CubicNumber> gamma, const PssPath& path) {
  path.validate(sigma);
  CubicNumber ib = CubicNumber::t().inverse();
  CubicNumber acc, pw(1);
  int n0 = path.eventually_periodic() ? path.preperiod : static_cast<int>(path.triples.size());
  for (int m = 0; m < n0; ++m) {
    pw *= ib;
    acc += pw * gamma_weight_exact(path.triples[static_cast<size_t>(m)].p, gamma);
  }
  if (!path.eventually_periodic()) return acc;
  int q = path.period;
  CubicNumber block, bw(1);
  for (int j = 0; j < q; ++j) {
    bw *= ib;
    block += bw * gamma_weight_exact(path.triples[static_cast<size_t>(path.preperiod + j)].p, gamma);
  }
  CubicNumber one(1);
  return acc + pw * block * (one - ib.pow(q)).inverse();
}

PssPath path_from_choices(const FractalContext& ctx, Letter a, const Word& choices) {
  PssPath path;
  path.parent = a;
  Letter cur = a;
  for (uint8_t ch : choices) {
    const auto& d = ctx.decs[static_cast<size_t>(cur)].at(ch);
    PssTriple t;
    t.p = d.p;
    t.c = d.c;
    t.s = d.s;
    path.triples.push_back(std::move(t));
    cur = d.c;
  }
  return path;
}

FractalCloud cloud(const FractalContext& ctx, Letter a, int n, size_t budget) {
  if (n < 1) throw std::invalid_argument("cloud: depth must be >= 1");
  FractalCloud out;
  out.a = a;
  out.depth = n;
  std::map<std::pair<long long, long long>, size_t> seen;
  Word choices;
  size_t leaves = 0;
  std::function<void(Letter, int, Complex)> rec = [&](Letter c, int k, Complex z) {
    if (k == n) {
      if (++leaves > budget)
        throw std::length_error("cloud: enumeration exceeds point budget; use branch-and-bound mode (v_min/nearest_point)");
      auto key = grid_key(z);
      if (seen.emplace(key, out.pts.size()).second) out.pts.push_back({z, choices});
      return;
    }
    const auto& ds = ctx.decs[static_cast<size_t>(c)];
    for (size_t i = 0; i < ds.size(); ++i) {
      choices.push_back(static_cast<uint8_t>(i));
      rec(ds[i].c, k + 1, z + ctx.ibp[static_cast<size_t>(k + 1)] * ds[i].gamma_p);
      choices.pop_back();
    }
  };
  rec(a, 0, 0.0);
  std::sort(out.pts.begin(), out.pts.end(), [](const CloudPoint& x, const CloudPoint& y) {
    if (x.z.real() != y.z.real()) return x.z.real() < y.z.real();
    return x.z.imag() < y.z.imag();
  });
  return out;
}

std::vector<Complex> cloud_points(const FractalContext& ctx, Letter a, int n) {
  // bottom-up with dedup per level
  std::vector<std::vector<Complex>> cur(static_cast<size_t>(ctx.sigma.size()), {Complex(0, 0)});
  for (int k = 0; k < n; ++k) {
    std::vector<std::vector<Complex>> next(static_cast<size_t>(ctx.sigma.size()));
    for (Letter c = 0; c < ctx.sigma.size(); ++c) {
      auto& dst = next[static_cast<size_t>(c)];
      for (const auto& d : ctx.decs[static_cast<size_t>(c)])
        for (Complex z : cur[static_cast<size_t>(d.c)]) dst.push_back(ctx.ibeta * (d.gamma_p + z));
      std::sort(dst.begin(), dst.end(), [](Complex x, Complex y) {
        auto kx = grid_key(x), ky = grid_key(y);
        return kx < ky;
      });
      dst.erase(std::unique(dst.begin(), dst.end(), [](Complex x, Complex y) { return grid_key(x) == grid_key(y); }),
                dst.end());
    }
    cur = std::move(next);
  }
  return cur[static_cast<size_t>(a)];
}

Json ExtremeReport::to_json(const FractalContext& ctx) const {
  Json j;
  j["letter"] = ctx.sigma.alphabet().names[static_cast<size_t>(a)];
  j["depth"] = depth;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", std::arg(tau));
  j["theta"] = buf;
  std::snprintf(buf, sizeof buf, "%.17g", v);
  j["v"] = buf;
  Json arr = Json::array();
  for (const auto& am : argmins) {
    Json ja;
    std::snprintf(buf, sizeof buf, "%.17g", am.z.real());
    ja["re"] = buf;
    std::snprintf(buf, sizeof buf, "%.17g", am.z.imag());
    ja["im"] = buf;
    ja["path"] = path_from_choices(ctx, a, am.choices).str(ctx.sigma.alphabet());
    ja["subfractal"] = am.first_triple;
    arr.push_back(ja);
  }
  j["argmins"] = arr;
  return j;
}

ExtremeReport v_min(const FractalContext& ctx, Letter a, int n, Complex tau, const VminOptions& opts) {
  if (n < 1) throw std::invalid_argument("v_min: depth must be >= 1");
  ExtremeReport rep;
  rep.a = a;
  rep.depth = n;
  rep.tau = tau;
  rep.cluster_tol = opts.cluster_tol;
  double best = 0;  // the all-empty-prefix path gives Re(tau*0) = 0
  bool have = false;
  std::vector<ExtremeReport::Argmin> keep;
  Word choices;
  struct Child {
    double key;
    Complex z2;
    uint8_t idx;
  };
  size_t max_branch = 0;
  for (const auto& ds : ctx.decs) max_branch = std::max(max_branch, ds.size());
  std::vector<std::vector<Child>> scratch(static_cast<size_t>(n), std::vector<Child>(max_branch));
  std::function<void(Letter, int, Complex)> rec = [&](Letter c, int k, Complex z) {
    if (k == n) {
      double val = (tau * z).real();
      if (!have || val < best) {
        best = val;
        have = true;
      }
      if (val <= best + opts.cluster_tol) {
        keep.push_back({val, z, choices, choices.empty() ? 0 : choices[0]});
        if (keep.size() > 4096) {  // drop entries that can no longer qualify
          std::vector<ExtremeReport::Argmin> f;
          for (auto& e : keep)
            if (e.value <= best + opts.cluster_tol) f.push_back(std::move(e));
          keep = std::move(f);
        }
      }
      return;
    }
    const auto& ds = ctx.decs[static_cast<size_t>(c)];
    Child* kids = scratch[static_cast<size_t>(k)].data();
    int nk = 0;
    for (size_t i = 0; i < ds.size(); ++i) {
      if (k == 0 && opts.first_triple >= 0 && static_cast<int>(i) != opts.first_triple) continue;
      Complex z2 = z + ctx.ibp[static_cast<size_t>(k + 1)] * ds[i].gamma_p;
      kids[nk++] = {(tau * z2).real(), z2, static_cast<uint8_t>(i)};
    }
    if (opts.prune) std::sort(kids, kids + nk, [](const Child& x, const Child& y) { return x.key < y.key; });
    double tail = ctx.tail_max(k + 1);
    for (int i = 0; i < nk; ++i) {
      if (opts.prune && have && kids[i].key - tail > best + opts.cluster_tol) break;  // sorted: rest are worse
      choices.push_back(kids[i].idx);
      rec(ds[static_cast<size_t>(kids[i].idx)].c, k + 1, kids[i].z2);
      choices.pop_back();
    }
  };
  rec(a, 0, 0.0);
  rep.v = best;
  // final filter + dedup by value cluster
  std::vector<ExtremeReport::Argmin> fin;
  for (auto& e : keep)
    if (e.value <= best + opts.cluster_tol) fin.push_back(std::move(e));
  std::sort(fin.begin(), fin.end(), [](const auto& x, const auto& y) {
    auto kx = grid_key(x.z), ky = grid_key(y.z);
    if (kx != ky) return kx < ky;
    return x.choices < y.choices;
  });
  fin.erase(std::unique(fin.begin(), fin.end(),
                        [](const auto& x, const auto& y) { return grid_key(x.z) == grid_key(y.z); }),
            fin.end());
  rep.argmins = std::move(fin);
  return rep;
}

ContinuationCheck continuation_check(const FractalContext& ctx, const ExtremeReport& report, double tol) {
  ContinuationCheck out;
  if (report.depth < 2) {  // vacuous
    out.ok = true;
    return out;
  }
  Complex tau1 = report.tau / ctx.beta0;
  for (size_t i = 0; i < report.argmins.size(); ++i) {
    const auto& am = report.argmins[i];
    const auto& d = ctx.decs[static_cast<size_t>(report.a)][am.choices[0]];
    // shifted path value: z' = beta * (z - beta^{-1} gamma(p1))
    Complex zshift = ctx.beta * (am.z - ctx.ibeta * d.gamma_p);
    ExtremeReport sub = v_min(ctx, d.c, report.depth - 1, tau1, {.cluster_tol = report.cluster_tol});
    double shift_res = (tau1 * zshift).real() - sub.v;
    out.max_shift_residual = std::max(out.max_shift_residual, std::abs(shift_res));
    double identity =
        (report.tau * am.z).real() - ((report.tau * ctx.ibeta * d.gamma_p).real() + sub.v / ctx.abs_beta);
    out.max_identity_residual = std::max(out.max_identity_residual, std::abs(identity));
    if ((std::abs(shift_res) > tol || std::abs(identity) > tol) && out.failing_argmin < 0)
      out.failing_argmin = static_cast<int>(i);
  }
  out.ok = out.failing_argmin < 0;
  return out;
}

ExpApproxReport exp_approx_check(const FractalContext& ctx, Letter a, Complex tau, int n_max) {
  if (n_max < 8) throw std::invalid_argument("exp_approx_check: n_max must be >= 8");
  ExpApproxReport rep;
  std::vector<double> vs;
  for (int n = 1; n <= n_max; ++n) vs.push_back(v_min(ctx, a, n, tau).v);
  double vN = vs.back();
  for (int n = 1; n <= n_max; ++n) {
    ExpApproxRow row;
    row.n = n;
    row.v = vs[static_cast<size_t>(n - 1)];
    row.delta = std::abs(row.v - vN);
    row.scaled = row.delta * std::pow(ctx.abs_beta, n);
    rep.rows.push_back(row);
    if (n < n_max) rep.c_est = std::max(rep.c_est, row.scaled);
  }
  rep.bounded = std::isfinite(rep.c_est);
  return rep;
}

namespace {

double v_sub(const FractalContext& ctx, Letter a, int label, int depth, Complex tau) {
  return v_min(ctx, a, depth, tau, {.first_triple = label}).v;
}

}  // namespace

std::vector<PsiCandidate> psi_scan(const FractalContext& ctx, Letter a, int grid, int depth, double gap_tol) {
  std::vector<PsiCandidate> out;
  int nlab = static_cast<int>(ctx.decs[static_cast<size_t>(a)].size());
  if (nlab < 2) return out;  // single subfractal: no distinct-label candidates
  auto tau_of = [](double th) { return Complex(std::cos(th), std::sin(th)); };
  std::vector<std::vector<double>> vsub(static_cast<size_t>(grid), std::vector<double>(static_cast<size_t>(nlab)));
  std::vector<int> lead(static_cast<size_t>(grid));
  for (int g = 0; g < grid; ++g) {
    double th = 2 * M_PI * g / grid;
    int bi = 0;
    for (int l = 0; l < nlab; ++l) {
      vsub[static_cast<size_t>(g)][static_cast<size_t>(l)] = v_sub(ctx, a, l, depth, tau_of(th));
      if (vsub[static_cast<size_t>(g)][static_cast<size_t>(l)] < vsub[static_cast<size_t>(g)][static_cast<size_t>(bi)])
        bi = l;
    }
    lead[static_cast<size_t>(g)] = bi;
  }
  for (int g = 0; g < grid; ++g) {
    int g2 = (g + 1) % grid;
    int l1 = lead[static_cast<size_t>(g)], l2 = lead[static_cast<size_t>(g2)];
    if (l1 == l2) continue;
    // bisect the crossing of v_{l1} - v_{l2}
    double lo = 2 * M_PI * g / grid, hi = 2 * M_PI * (g + 1) / grid;
    double d_lo = vsub[static_cast<size_t>(g)][static_cast<size_t>(l1)] - vsub[static_cast<size_t>(g)][static_cast<size_t>(l2)];
    for (int it = 0; it < 60; ++it) {
      double mid = 0.5 * (lo + hi);
      double d = v_sub(ctx, a, l1, depth, tau_of(mid)) - v_sub(ctx, a, l2, depth, tau_of(mid));
      if ((d < 0) == (d_lo < 0))
        lo = mid;
      else
        hi = mid;
    }
    double th = 0.5 * (lo + hi);
    Complex tau = tau_of(th);
    double va = v_min(ctx, a, depth, tau).v;
    double v1 = v_sub(ctx, a, l1, depth, tau), v2 = v_sub(ctx, a, l2, depth, tau);
    if (std::abs(v1 - v2) > gap_tol) continue;
    if (std::min(v1, v2) > va + gap_tol) continue;  // a third label is strictly better
    PsiCandidate cand;
    cand.theta = th;
    cand.label1 = l1;
    cand.label2 = l2;
    cand.gap = std::abs(v1 - v2);
    ExtremeReport r1 = v_min(ctx, a, depth, tau, {.first_triple = l1});
    ExtremeReport r2 = v_min(ctx, a, depth, tau, {.first_triple = l2});
    double dmin = std::numeric_limits<double>::infinity();
    for (const auto& x : r1.argmins)
      for (const auto& y : r2.argmins) dmin = std::min(dmin, std::abs(x.z - y.z));
    cand.separation = dmin;
    out.push_back(cand);
  }
  return out;
}

PssPath reverse_prefix_suffix(const Substitution& sigma, const std::vector<PssTriple>& chain, int k) {
  if (k < 1 || k > static_cast<int>(chain.size()))
    throw std::invalid_argument("reverse_prefix_suffix: k outside chain");
  PssPath path;
  for (int m = k - 1; m >= 0; --m) path.triples.push_back(chain[static_cast<size_t>(m)]);
  if (k < static_cast<int>(chain.size())) {
    path.parent = chain[static_cast<size_t>(k)].c;
  } else {
    // recover the unique parent with sigma(parent) = p c s
    Word img = chain.back().p;
    img.push_back(static_cast<uint8_t>(chain.back().c));
    img.insert(img.end(), chain.back().s.begin(), chain.back().s.end());
    int found = -1;
    for (Letter b = 0; b < sigma.size(); ++b)
      if (sigma.image(b) == img) {
        if (found >= 0) throw std::invalid_argument("reverse_prefix_suffix: ambiguous parent");
        found = b;
      }
    if (found < 0) throw std::invalid_argument("reverse_prefix_suffix: no parent matches the last triple");
    path.parent = found;
  }
  path.validate(sigma);
  return path;
}

DerivativeCheck one_sided_derivative_check(const FractalContext& ctx, Letter a, Complex tau, int n,
                                           std::span<const double> h_list) {
  DerivativeCheck out;
  ExtremeReport rep = v_min(ctx, a, n, tau);
  double im_max = -std::numeric_limits<double>::infinity();
  double im_min = std::numeric_limits<double>::infinity();
  for (const auto& am : rep.argmins) {
    double im = (tau * am.z).imag();
    im_max = std::max(im_max, im);
    im_min = std::min(im_min, im);
  }
  out.right_limit = -im_max;
  out.left_limit = -im_min;
  for (double h : h_list) {
    Complex tp = tau * Complex(std::cos(h), std::sin(h));
    Complex tm = tau * Complex(std::cos(h), -std::sin(h));
    out.right_fd.push_back((v_min(ctx, a, n, tp).v - rep.v) / h);
    out.left_fd.push_back((v_min(ctx, a, n, tm).v - rep.v) / (-h));
  }
  if (!h_list.empty()) {
    out.right_residual = std::abs(out.right_fd.back() - out.right_limit);
    out.left_residual = std::abs(out.left_fd.back() - out.left_limit);
  }
  return out;
}

NearestPointResult nearest_point(const FractalContext& ctx, Letter a, int first_triple, Complex z, int depth) {
  if (depth > kMaxFractalDepth) throw std::invalid_argument("nearest_point: depth too large");
  double best = std::numeric_limits<double>::infinity();
  // children explored closest-first so the incumbent drops fast
  struct Child {
    double d;
    Complex z2;
    Letter c2;
  };
  size_t max_branch = 0;
  for (const auto& ds : ctx.decs) max_branch = std::max(max_branch, ds.size());
  std::vector<std::vector<Child>> scratch(static_cast<size_t>(depth), std::vector<Child>(max_branch));
  std::function<void(Letter, int, Complex)> rec = [&](Letter c, int k, Complex cur) {
    if (k == depth) {
      best = std::min(best, std::abs(cur - z));
      return;
    }
    const auto& ds = ctx.decs[static_cast<size_t>(c)];
    Child* kids = scratch[static_cast<size_t>(k)].data();
    int nk = 0;
    for (size_t i = 0; i < ds.size(); ++i) {
      if (k == 0 && first_triple >= 0 && static_cast<int>(i) != first_triple) continue;
      Complex z2 = cur + ctx.ibp[static_cast<size_t>(k + 1)] * ds[i].gamma_p;
      kids[nk++] = {std::abs(z2 - z), z2, ds[i].c};
    }
    std::sort(kids, kids + nk, [](const Child& x, const Child& y) { return x.d < y.d; });
    double tail = ctx.tail_max(k + 1);
    for (int i = 0; i < nk; ++i) {
      if (kids[i].d - tail > best) break;  // sorted: the rest are worse
      rec(kids[i].c2, k + 1, kids[i].z2);
    }
  };
  rec(a, 0, 0.0);
  return {best, ctx.tail_max(depth)};
}

// ---- KdTree2 ----

KdTree2::KdTree2(std::vector<Complex> pts) {
  nodes_.reserve(pts.size());
  root_ = build(pts, 0, static_cast<int>(pts.size()), true);
}

int KdTree2::build(std::vector<Complex>& pts, int lo, int hi, bool by_x) {
  if (lo >= hi) return -1;
  int mid = (lo + hi) / 2;
  std::nth_element(pts.begin() + lo, pts.begin() + mid, pts.begin() + hi, [by_x](Complex a, Complex b) {
    return by_x ? a.real() < b.real() : a.imag() < b.imag();
  });
  Node node;
  node.p = pts[static_cast<size_t>(mid)];
  node.by_x = by_x;
  int self = static_cast<int>(nodes_.size());
  nodes_.push_back(node);
  int l = build(pts, lo, mid, !by_x);
  int r = build(pts, mid + 1, hi, !by_x);
  nodes_[static_cast<size_t>(self)].left = l;
  nodes_[static_cast<size_t>(self)].right = r;
  return self;
}

void KdTree2::query(int node, Complex q, double& best) const {
  if (node < 0) return;
  const Node& nd = nodes_[static_cast<size_t>(node)];
  best = std::min(best, std::abs(nd.p - q));
  double diff = nd.by_x ? q.real() - nd.p.real() : q.imag() - nd.p.imag();
  int near = diff < 0 ? nd.left : nd.right;
  int far = diff < 0 ? nd.right : nd.left;
  query(near, q, best);
  if (std::abs(diff) < best) query(far, q, best);
}

double KdTree2::nearest(Complex q) const {
  double best = std::numeric_limits<double>::infinity();
  query(root_, q, best);
  return best;
}

double hausdorff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  KdTree2 ta(a), tb(b);
  double h = 0;
  for (Complex z : a) h = std::max(h, tb.nearest(z));
  for (Complex z : b) h = std::max(h, ta.nearest(z));
  return h;
}

double set_distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  KdTree2 tb(b);
  double d = std::numeric_limits<double>::infinity();
  for (Complex z : a) d = std::min(d, tb.nearest(z));
  return d;
}

}  // namespace wander
