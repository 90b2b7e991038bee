#include "wander/ay.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace wander {

namespace {

const Rational kHalf{1, 2};

CubicNumber cubic(long c0, long c1, long c2) { return {Rational(c0), Rational(c1), Rational(c2)}; }

// half-exchange of [t0, t1)
double half_exchange(double t0, double t1, double x) {
  double m = 0.5 * (t0 + t1);
  if (x >= t0 && x < m) return x + 0.5 * (t1 - t0);
  if (x >= m && x < t1) return x - 0.5 * (t1 - t0);
  return x;
}

std::vector<Word> ay_images() {
  // 1->35, 2->45, 3->46, 4->17, 5->18, 6->19, 7->29, 8->2, 9->3 (0-based)
  return {{2, 4}, {3, 4}, {3, 5}, {0, 6}, {0, 7}, {0, 8}, {1, 8}, {1}, {2}};
}

struct KappaMap {
  Complex mul, add;
  Complex operator()(Complex z) const { return add + mul * z; }
};

std::array<KappaMap, 3> kappa_maps() {
  CubicNumber b = CubicNumber::t();
  CubicNumber k0a = b.pow(-4), k0m = b.pow(-3);
  CubicNumber one(1);
  CubicNumber k1a = b.pow(-4) + b.pow(-6) + b.pow(-10) * (one - b.pow(-3)).inverse();
  CubicNumber k1m = CubicNumber(0) - b.pow(-4);
  CubicNumber k2a = b.pow(-3) + b.pow(-4), k2m = b.pow(-3);
  return {KappaMap{k0m.embed_beta(), k0a.embed_beta()}, KappaMap{k1m.embed_beta(), k1a.embed_beta()},
          KappaMap{k2m.embed_beta(), k2a.embed_beta()}};
}

}  // namespace

double ay_map(double t) {
  double a = CubicNumber::alpha();
  double a2 = a * a;
  t = half_exchange(a + a2, 1.0, t);
  t = half_exchange(a, a + a2, t);
  t = half_exchange(0.0, a, t);
  t = half_exchange(0.0, 1.0, t);
  return t;
}

const AyConstants& AyConstants::get() {
  static const AyConstants ay = [] {
    AyConstants c;
    c.letters = Alphabet::digits(9);
    c.sigma = Substitution(c.letters, ay_images());
    c.M = c.sigma.abelianization();
    c.alpha = CubicNumber::alpha();
    c.beta = CubicNumber::beta();

    // gamma = (b^2+b+1, -b, -b, -b^2-b-1, b+1, b+1, -b^2-b-2, -1, -1)
    c.gamma_exact = {cubic(1, 1, 1),  cubic(0, -1, 0), cubic(0, -1, 0),
                     cubic(-1, -1, -1), cubic(1, 1, 0), cubic(1, 1, 0),
                     cubic(-2, -1, -1), cubic(-1, 0, 0), cubic(-1, 0, 0)};
    // transcription gate: M gamma = t gamma exactly in the field
    for (int a = 0; a < 9; ++a) {
      CubicNumber lhs;
      for (int b = 0; b < 9; ++b)
        if (c.M.at(a, b) != 0)
          lhs += CubicNumber(Rational(c.M.at(a, b)), 0, 0) * c.gamma_exact[static_cast<size_t>(b)];
      if (lhs != CubicNumber::t() * c.gamma_exact[static_cast<size_t>(a)])
        throw std::logic_error("AyConstants: M gamma != beta gamma");
    }
    for (const auto& g : c.gamma_exact) c.gamma.push_back(g.embed_beta());

    // alpha + alpha^2 + alpha^3 = 1 exactly
    CubicNumber t = CubicNumber::t();
    if (t + t * t + t * t * t != CubicNumber(1)) throw std::logic_error("AyConstants: alpha relation fails");

    // Perron lengths: kernel of (M^t - alpha^{-1} I) over the field
    {
      CubicNumber inv_alpha = t.inverse();
      std::vector<std::vector<CubicNumber>> A(9, std::vector<CubicNumber>(9));
      IntMatrix Mt = c.M.transpose();
      for (int i = 0; i < 9; ++i)
        for (int j = 0; j < 9; ++j) {
          A[static_cast<size_t>(i)][static_cast<size_t>(j)] = CubicNumber(Rational(Mt.at(i, j)), 0, 0);
          if (i == j) A[static_cast<size_t>(i)][static_cast<size_t>(j)] -= inv_alpha;
        }
      std::vector<CubicNumber> v = cubic_kernel_vector(A);
      CubicNumber sum;
      for (const auto& x : v) sum += x;
      CubicNumber inv_sum = sum.inverse();
      for (auto& x : v) x *= inv_sum;
      c.lambda_exact = v;
      for (const auto& x : v) {
        double d = x.embed_alpha();
        if (!(d > 0)) throw std::logic_error("AyConstants: Perron vector not positive");
        c.lambda.push_back(d);
      }
    }

    // z0 and the kappa endpoint, with their closed forms
    {
      CubicNumber one(1);
      c.z0 = t.pow(-4) * (one - t.pow(-3)).inverse();
      CubicNumber z0_closed = (cubic(-3, -2, -1)) * CubicNumber(kHalf, 0, 0);
      if (c.z0 != z0_closed) throw std::logic_error("AyConstants: z0 closed form fails");
      c.kappa_end = t.pow(-3) * (one - t.pow(-3)).inverse();
      if (c.kappa_end != cubic(-1, -2, -1) * CubicNumber(kHalf, 0, 0))
        throw std::logic_error("AyConstants: kappa(1) closed form fails");
    }

    // the A-Y map as a 10-interval exchange: the 9-letter partition refined
    // at (1-alpha)/2, where the circle translation wraps
    {
      std::vector<CubicNumber> cuts;  // interior cuts
      CubicNumber acc;
      for (int a = 0; a < 9; ++a) {
        acc += c.lambda_exact[static_cast<size_t>(a)];
        if (a < 8) cuts.push_back(acc);
      }
      CubicNumber wrap = (CubicNumber(1) - t) * CubicNumber(kHalf, 0, 0);
      cuts.push_back(wrap);
      std::sort(cuts.begin(), cuts.end(),
                [](const CubicNumber& x, const CubicNumber& y) { return x.embed_alpha() < y.embed_alpha(); });
      std::vector<double> lefts{0.0};
      for (const auto& x : cuts) lefts.push_back(x.embed_alpha());
      lefts.push_back(1.0);
      int n = static_cast<int>(lefts.size()) - 1;
      Alphabet pa;
      std::vector<double> len;
      std::vector<int> p0(static_cast<size_t>(n));
      for (int i = 0; i < n; ++i) {
        pa.names.push_back("c" + std::to_string(i));
        len.push_back(lefts[static_cast<size_t>(i + 1)] - lefts[static_cast<size_t>(i)]);
        p0[static_cast<size_t>(i)] = i;
      }
      // image order from the direct composition
      std::vector<double> img(static_cast<size_t>(n));
      for (int i = 0; i < n; ++i) {
        double mid = 0.5 * (lefts[static_cast<size_t>(i)] + lefts[static_cast<size_t>(i + 1)]);
        double d = ay_map(mid) - mid;
        // piecewise translation: verify on several interior points
        for (double f : {0.17, 0.51, 0.93}) {
          double x = lefts[static_cast<size_t>(i)] +
                     f * (lefts[static_cast<size_t>(i + 1)] - lefts[static_cast<size_t>(i)]);
          if (std::abs(ay_map(x) - x - d) > 1e-12)
            throw std::logic_error("AyConstants: refinement piece is not a translation");
        }
        img[static_cast<size_t>(i)] = lefts[static_cast<size_t>(i)] + d;
      }
      std::vector<int> p1(static_cast<size_t>(n));
      std::iota(p1.begin(), p1.end(), 0);
      std::sort(p1.begin(), p1.end(), [&](int x, int y) { return img[static_cast<size_t>(x)] < img[static_cast<size_t>(y)]; });
      c.T = Iem(pa, len, p0, p1);
      // the Iem must reproduce the composition
      for (int i = 0; i < 997; ++i) {
        double x = (i + 0.5) / 997.0;
        if (std::abs(c.T.evaluate(x) - ay_map(x)) > 1e-12)
          throw std::logic_error("AyConstants: Iem model disagrees with the composition");
      }
      // 9-letter coding partition
      CodingPartition cp;
      cp.alphabet = c.letters;
      cp.lefts.push_back(0.0);
      double x = 0;
      for (int a = 0; a < 9; ++a) {
        x += c.lambda[static_cast<size_t>(a)];
        cp.lefts.push_back(x);
        cp.letters.push_back(a);
      }
      cp.lefts.back() = 1.0;
      c.partition = cp;
    }

    // the induced pieces on [0, alpha) must spell sigma after the letter match
    {
      FirstReturnResult fr = first_return(c.T, c.alpha, c.partition);
      if (fr.budget_exhausted || static_cast<int>(fr.pieces.size()) != 9)
        throw std::logic_error("AyConstants: induced system does not have 9 pieces");
      for (const auto& p : fr.pieces) {
        int match = -1;
        for (int a = 0; a < 9; ++a)
          if (p.word == c.sigma.image(a)) match = a;
        if (match < 0) throw std::logic_error("AyConstants: induced return word outside sigma");
        if (std::abs((p.hi - p.lo) - c.alpha * c.lambda[static_cast<size_t>(match)]) > 1e-9)
          throw std::logic_error("AyConstants: induced piece length mismatch");
        c.induced_letters.push_back(match);
      }
    }
    return c;
  }();
  return ay;
}

const CodingPartition& ay_partition() { return AyConstants::get().partition; }

std::vector<std::vector<int>> ay_partition_search() {
  const AyConstants& ay = AyConstants::get();
  // candidate orderings must place all circle discontinuities of T on cuts
  std::vector<double> circle_bps;
  {
    double a = ay.alpha, a2 = a * a;
    circle_bps = {a / 2, a, a + a2 / 2, a + a2, (a + a2 + 1) / 2};
  }
  std::vector<int> perm{0, 1, 2, 3, 4, 5, 6, 7, 8};
  std::vector<std::vector<int>> found;
  do {
    double x = 0;
    bool hits[5] = {false, false, false, false, false};
    for (int k = 0; k < 8; ++k) {
      x += ay.lambda[static_cast<size_t>(perm[static_cast<size_t>(k)])];
      for (int b = 0; b < 5; ++b)
        if (std::abs(x - circle_bps[static_cast<size_t>(b)]) < 1e-11) hits[b] = true;
    }
    if (!(hits[0] && hits[1] && hits[2] && hits[3] && hits[4])) continue;
    // build the coding partition for this ordering and match return words
    CodingPartition cp;
    cp.alphabet = ay.letters;
    cp.lefts.push_back(0.0);
    double xx = 0;
    for (int k = 0; k < 9; ++k) {
      xx += ay.lambda[static_cast<size_t>(perm[static_cast<size_t>(k)])];
      cp.lefts.push_back(xx);
      cp.letters.push_back(perm[static_cast<size_t>(k)]);
    }
    cp.lefts.back() = 1.0;
    FirstReturnResult fr = first_return(ay.T, ay.alpha, cp, 100);
    if (fr.budget_exhausted || static_cast<int>(fr.pieces.size()) != 9) continue;
    bool ok = true;
    std::vector<bool> used(9, false);
    for (const auto& p : fr.pieces) {
      int match = -1;
      for (int a = 0; a < 9; ++a)
        if (!used[static_cast<size_t>(a)] && p.word == ay.sigma.image(a)) match = a;
      if (match < 0 || std::abs((p.hi - p.lo) - ay.alpha * ay.lambda[static_cast<size_t>(match)]) > 1e-9) {
        ok = false;
        break;
      }
      used[static_cast<size_t>(match)] = true;
    }
    if (ok) found.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return found;
}

FractalContext ay_context(double theta) {
  const AyConstants& ay = AyConstants::get();
  std::vector<Complex> g = ay.gamma;
  Complex rot(std::cos(theta), std::sin(theta));
  for (auto& z : g) z *= rot;
  return {ay.sigma, g, ay.beta};
}

// ---- tribonacci ----

bool trib_digits_valid(const std::vector<int>& digits) {
  int run = 0;
  for (int d : digits) {
    if (d != 0 && d != 1) return false;
    run = d == 1 ? run + 1 : 0;
    if (run >= 3) return false;
  }
  return true;
}

Complex trib_value(const std::vector<int>& digits) {
  if (!trib_digits_valid(digits)) throw std::invalid_argument("trib_value: digits must be 0/1 without 111");
  Complex ib = 1.0 / CubicNumber::beta();
  Complex w = ib * ib;  // beta^{-2}; digit k carries beta^{-(k+2)}
  Complex s = 0;
  for (int d : digits) {
    w *= ib;
    if (d) s += w;
  }
  return s;
}

std::vector<Complex> trib_cloud(int len) {
  Complex ib = 1.0 / CubicNumber::beta();
  std::vector<Complex> pw(static_cast<size_t>(len) + 3);
  pw[0] = 1.0;
  for (size_t i = 1; i < pw.size(); ++i) pw[i] = pw[i - 1] * ib;
  std::vector<Complex> out;
  std::function<void(int, int, Complex)> rec = [&](int k, int run, Complex v) {
    if (k > len) {
      out.push_back(v);
      return;
    }
    rec(k + 1, 0, v);
    if (run < 2) rec(k + 1, run + 1, v + pw[static_cast<size_t>(k + 2)]);
  };
  rec(1, 0, 0.0);
  std::sort(out.begin(), out.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  out.erase(std::unique(out.begin(), out.end(),
                        [](Complex a, Complex b) { return std::abs(a - b) < 1e-13; }),
            out.end());
  return out;
}

Complex kappa(double t, int depth) {
  if (t < 0 || t > 1) throw std::out_of_range("kappa: parameter outside [0,1]");
  auto maps = kappa_maps();
  std::vector<int> digits;
  double x = t;
  for (int i = 0; i < depth; ++i) {
    x *= 3;
    int d = static_cast<int>(std::floor(x));
    if (d > 2) d = 2;
    digits.push_back(d);
    x -= d;
  }
  Complex z = AyConstants::get().z0.embed_beta();
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) z = maps[static_cast<size_t>(*it)](z);
  return z;
}

std::vector<Complex> kappa_grid(int depth) {
  auto maps = kappa_maps();
  const AyConstants& ay = AyConstants::get();
  std::vector<Complex> pts{ay.z0.embed_beta(), (ay.kappa_end + ay.z0).embed_beta()};
  for (int d = 0; d < depth; ++d) {
    std::vector<Complex> next;
    next.reserve(pts.size() * 3);
    for (const auto& m : maps)
      for (Complex z : pts) next.push_back(m(z));
    pts = std::move(next);
  }
  std::sort(pts.begin(), pts.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  pts.erase(std::unique(pts.begin(), pts.end(), [](Complex a, Complex b) { return std::abs(a - b) < 1e-14; }),
            pts.end());
  return pts;
}

// ---- boundary curves ----

namespace {

std::vector<BoundarySegment> curve_segments(Letter a) {
  const CubicNumber h = CubicNumber(kHalf, 0, 0);
  auto C = [&](long c0, long c1, long c2) { return cubic(c0, c1, c2); };
  switch (a) {
    case 0:  // C1
      return {{-1, C(0, 0, 0)},
              {-2, C(1, 1, 1)},
              {0, C(3, 4, 3) * h},
              {-2, C(3, 4, 3) * h},
              {-1, C(1, 2, 1) * h},
              {0, C(1, 2, 1) * h}};
    case 1:  // C2
    case 2:  // C3 = C2
      return {{0, C(0, 0, 0)}, {1, C(0, -1, 0)}, {0, C(1, 0, 1) * h}, {1, C(1, 0, 1) * h}};
    case 3:  // C4
      return {{1, C(0, 0, 0)},
              {-1, C(1, 1, 0)},
              {-3, C(1, 1, 0)},
              {-2, C(-1, -1, -1)},
              {-2, C(3, 2, 1) * h},
              {-1, C(3, 2, 1) * h}};
    case 4:  // C5
    case 5:  // C6 = C5
      return {{1, C(0, 0, 0)}, {-1, C(1, 1, 0)}, {1, C(3, 2, 1) * h}, {-1, C(3, 2, 1) * h}};
    case 6:  // C7
      return {{-1, C(0, 0, 0)},
              {0, C(-1, 0, 0)},
              {-2, C(-1, 0, 0)},
              {-1, C(-2, -1, -1)},
              {-2, C(1, 2, 1) * h},
              {0, C(1, 2, 1) * h}};
    case 7:  // C8
    case 8:  // C9 = C8
      return {{-1, C(0, 0, 0)}, {0, C(-1, 0, 0)}, {-1, C(1, 2, 1) * h}, {0, C(1, 2, 1) * h}};
    default:
      throw std::out_of_range("boundary_curve: letter outside 1..9");
  }
}

}  // namespace

BoundaryCurve boundary_curve(Letter a) {
  BoundaryCurve c;
  c.a = a;
  c.segments = curve_segments(a);
  return c;
}

std::vector<std::vector<Complex>> BoundaryCurve::polylines(int depth) const {
  // K sample in parameter order (kappa of the triadic grid, then shift by -z0)
  const AyConstants& ay = AyConstants::get();
  Complex z0 = ay.z0.embed_beta();
  long n = 1;
  for (int i = 0; i < depth; ++i) n *= 3;
  std::vector<Complex> base;
  base.reserve(static_cast<size_t>(n) + 1);
  for (long k = 0; k <= n; ++k) base.push_back(kappa(static_cast<double>(k) / static_cast<double>(n), depth + 8) - z0);
  std::vector<std::vector<Complex>> out;
  Complex beta = CubicNumber::beta();
  for (const auto& seg : segments) {
    Complex scale = std::pow(beta, seg.beta_pow);
    Complex tr = seg.translate.embed_beta();
    std::vector<Complex> line;
    line.reserve(base.size());
    for (Complex z : base) line.push_back(scale * z + tr);
    out.push_back(std::move(line));
  }
  return out;
}

bool BoundaryCurve::jordan_chain() const {
  // endpoints of K are 0 and kappa_end; exact endpoint matching
  const AyConstants& ay = AyConstants::get();
  CubicNumber t = CubicNumber::t();
  auto ends = [&](const BoundarySegment& s) {
    CubicNumber scale = t.pow(s.beta_pow);
    return std::pair<CubicNumber, CubicNumber>{s.translate, scale * ay.kappa_end + s.translate};
  };
  int n = static_cast<int>(segments.size());
  for (int i = 0; i < n; ++i) {
    auto [a1, a2] = ends(segments[static_cast<size_t>(i)]);
    auto [b1, b2] = ends(segments[static_cast<size_t>((i + 1) % n)]);
    int shared = (a1 == b1) + (a1 == b2) + (a2 == b1) + (a2 == b2);
    if (shared != 1) return false;
  }
  return true;
}

// ---- IFS verification ----

namespace {

struct IfsEq {
  Letter lhs;
  // rhs: beta^{-1}(shift1 + F_{c1}) u beta^{-1}(shift2 + F_{c2}); c2 < 0 for single-term
  Letter c1;
  CubicNumber shift1;
  Letter c2;
  CubicNumber shift2;
};

std::vector<IfsEq> ifs_equations() {
  CubicNumber t = CubicNumber::t();
  CubicNumber zero;
  return {
      {0, 1, zero, 4, CubicNumber(0) - t},            // F1 = b^-1 F2 u b^-1(-b + F5)
      {1, 3, zero, 4, CubicNumber(0) - t.inverse()},  // F2 = b^-1 F4 u b^-1(-b^-1 + F5)
      {3, 0, zero, 6, t.inverse()},                   // F4 = b^-1 F1 u b^-1(b^-1 + F7)
      {4, 0, zero, 7, t.inverse()},                   // F5 = b^-1 F1 u b^-1(b^-1 + F8)
      {6, 1, zero, 7, CubicNumber(0) - t},            // F7 = b^-1 F2 u b^-1(-b + F8)
      {7, 1, zero, -1, zero},                         // F8 = b^-1 F2
  };
}

std::vector<Complex> transform_union(const FractalContext& ctx, const IfsEq& eq,
                                     const std::vector<std::vector<Complex>>& clouds) {
  std::vector<Complex> out;
  Complex ib = ctx.ibeta;
  Complex s1 = eq.shift1.embed_beta();
  for (Complex z : clouds[static_cast<size_t>(eq.c1)]) out.push_back(ib * (s1 + z));
  if (eq.c2 >= 0) {
    Complex s2 = eq.shift2.embed_beta();
    for (Complex z : clouds[static_cast<size_t>(eq.c2)]) out.push_back(ib * (s2 + z));
  }
  return out;
}

}  // namespace

IfsReport verify_ifs(int depth, double tol) {
  if (depth < 8) throw std::invalid_argument("verify_ifs: depth must be >= 8");
  IfsReport rep;
  rep.depth = depth;
  FractalContext ctx = ay_context(0.0);
  auto eqs = ifs_equations();

  auto clouds_at = [&](int n) {
    std::vector<std::vector<Complex>> c(9);
    for (Letter a = 0; a < 9; ++a) c[static_cast<size_t>(a)] = cloud_points(ctx, a, n);
    return c;
  };
  auto residuals = [&](const std::vector<std::vector<Complex>>& c) {
    std::array<double, 6> r{};
    for (size_t e = 0; e < eqs.size(); ++e)
      r[e] = hausdorff(c[static_cast<size_t>(eqs[e].lhs)], transform_union(ctx, eqs[e], c));
    return r;
  };

  auto c_depth = clouds_at(depth);
  auto c_prev = clouds_at(depth - 2);
  rep.residual = residuals(c_depth);
  rep.residual_prev = residuals(c_prev);
  rep.equal_residual = {hausdorff(c_depth[1], c_depth[2]), hausdorff(c_depth[4], c_depth[5]),
                        hausdorff(c_depth[7], c_depth[8])};
  // matched-depth exactness: left at depth vs transformed right at depth-1
  auto c_m1 = clouds_at(depth - 1);
  for (size_t e = 0; e < eqs.size(); ++e)
    rep.matched_exact[e] = hausdorff(c_depth[static_cast<size_t>(eqs[e].lhs)], transform_union(ctx, eqs[e], c_m1));
  // C estimated at depth c_depth (max radius over all clouds)
  rep.c_depth = std::max(16, depth);
  auto c_est_clouds = rep.c_depth == depth ? c_depth : clouds_at(rep.c_depth);
  for (const auto& cl : c_est_clouds)
    for (Complex z : cl) rep.c_est = std::max(rep.c_est, std::abs(z));
  rep.bound = rep.c_est * std::pow(std::abs(ctx.beta), -depth) + tol;
  rep.pass = true;
  for (size_t e = 0; e < eqs.size(); ++e)
    if (rep.residual[e] > rep.bound) {
      rep.pass = false;
      rep.failing_equation = static_cast<int>(e);
    }
  for (double r : rep.equal_residual)
    if (r > rep.bound) rep.pass = false;
  return rep;
}

Json IfsReport::to_json() const {
  Json j;
  j["depth"] = depth;
  j["c_est"] = c_est;
  j["c_depth"] = c_depth;
  j["bound"] = bound;
  j["residuals"] = residual;
  j["residuals_depth_minus_2"] = residual_prev;
  j["equality_residuals"] = equal_residual;
  j["matched_depth_exactness"] = matched_exact;
  j["pass"] = pass;
  if (failing_equation >= 0) j["failing_equation"] = failing_equation;
  return j;
}

// ---- URP witnesses ----

namespace {

struct WitnessSpec {
  int case_id;
  Letter a;
  PssPath path;
  CubicNumber expected;
};

PssPath make_path(Letter parent, std::vector<std::array<int, 3>> triples_pcs, int preperiod = -1, int period = 0) {
  // encoding: {p_letter or -1 for empty, c_letter, s_letter or -1}
  PssPath path;
  path.parent = parent;
  for (const auto& t : triples_pcs) {
    PssTriple tr;
    if (t[0] >= 0) tr.p.push_back(static_cast<uint8_t>(t[0]));
    tr.c = t[1];
    if (t[2] >= 0) tr.s.push_back(static_cast<uint8_t>(t[2]));
    path.triples.push_back(std::move(tr));
  }
  path.preperiod = preperiod;
  path.period = period;
  return path;
}

std::vector<WitnessSpec> urp_witnesses() {
  const CubicNumber h = CubicNumber(kHalf, 0, 0);
  std::vector<WitnessSpec> w;
  // letters 0-based; paper letters in comments
  // (i) a=1: (3,5,e) -> -1 ; (e,3,5)(e,4,6)(1,7,e)[(e,2,9)(e,4,5)(1,7,e)] -> (-b^2-2b-3)/2
  w.push_back({1, 0, make_path(0, {{2, 4, -1}}), cubic(-1, 0, 0)});
  w.push_back({1, 0,
               make_path(0, {{-1, 2, 4}, {-1, 3, 5}, {0, 6, -1}, {-1, 1, 8}, {-1, 3, 4}, {0, 6, -1}}, 3, 3),
               cubic(-3, -2, -1) * h});
  // (ii) a=2: (4,5,e) -> -b^2-2b-2 ; (4,5,e)(1,8,e) -> b^2+b+2
  w.push_back({2, 1, make_path(1, {{3, 4, -1}}), cubic(-2, -2, -1)});
  w.push_back({2, 1, make_path(1, {{3, 4, -1}, {0, 7, -1}}), cubic(2, 1, 1)});
  // (iii) a=3: (4,6,e) ; (4,6,e)(1,9,e)
  w.push_back({3, 2, make_path(2, {{3, 5, -1}}), cubic(-2, -2, -1)});
  w.push_back({3, 2, make_path(2, {{3, 5, -1}, {0, 8, -1}}), cubic(2, 1, 1)});
  // (iv) a=4: (1,7,e) -> b^2+2b+2 ; (e,1,7)(3,5,e) -> -b^2-b-1
  w.push_back({4, 3, make_path(3, {{0, 6, -1}}), cubic(2, 2, 1)});
  w.push_back({4, 3, make_path(3, {{-1, 0, 6}, {2, 4, -1}}), cubic(-1, -1, -1)});
  // (v) a=5: (1,8,e) -> b^2+2b+2 ; (e,1,8)(3,5,e)(e,1,8)(e,3,5)(4,6,e)[(e,1,9)(e,3,5)(4,6,e)] -> (3b^2+6b+7)/2
  w.push_back({5, 4, make_path(4, {{0, 7, -1}}), cubic(2, 2, 1)});
  w.push_back({5, 4,
               make_path(4,
                         {{-1, 0, 7}, {2, 4, -1}, {-1, 0, 7}, {-1, 2, 4}, {3, 5, -1},
                          {-1, 0, 8}, {-1, 2, 4}, {3, 5, -1}},
                         5, 3),
               cubic(7, 6, 3) * h});
  // (vi) a=6: (1,9,e) ; (e,1,9)(3,5,e)(e,1,8)(e,3,5)(4,6,e)[...]
  w.push_back({6, 5, make_path(5, {{0, 8, -1}}), cubic(2, 2, 1)});
  w.push_back({6, 5,
               make_path(5,
                         {{-1, 0, 8}, {2, 4, -1}, {-1, 0, 7}, {-1, 2, 4}, {3, 5, -1},
                          {-1, 0, 8}, {-1, 2, 4}, {3, 5, -1}},
                         5, 3),
               cubic(7, 6, 3) * h});
  // (vii) a=7: (2,9,e) -> -1 ; (e,2,9)(4,5,e)(e,1,8)(e,3,5)(4,6,e)[...] -> (b^2+2b+1)/2
  w.push_back({7, 6, make_path(6, {{1, 8, -1}}), cubic(-1, 0, 0)});
  w.push_back({7, 6,
               make_path(6,
                         {{-1, 1, 8}, {3, 4, -1}, {-1, 0, 7}, {-1, 2, 4}, {3, 5, -1},
                          {-1, 0, 8}, {-1, 2, 4}, {3, 5, -1}},
                         5, 3),
               cubic(1, 2, 1) * h});
  return w;
}

}  // namespace

UrpReport verify_urp_witnesses(int deep_depth, double tol) {
  const AyConstants& ay = AyConstants::get();
  FractalContext ctx = ay_context(0.0);
  UrpReport rep;
  rep.tol = tol;
  rep.all_exact = true;
  rep.all_within = true;
  for (const auto& spec : urp_witnesses()) {
    UrpWitnessRow row;
    row.case_id = spec.case_id;
    row.a = spec.a;
    row.path = spec.path.str(ay.letters);
    row.value = value_of_path_exact(ay.sigma, ay.gamma_exact, spec.path);
    row.expected = spec.expected;
    row.exact_match = row.value == row.expected;
    Complex z = row.value.embed_beta();
    for (int sub = 0; sub < 2; ++sub) {
      NearestPointResult deep = nearest_point(ctx, spec.a, sub, z, deep_depth);
      NearestPointResult lit = nearest_point(ctx, spec.a, sub, z, 14);
      row.dist_sub[sub] = deep.distance;
      row.dist14_sub[sub] = lit.distance;
      row.tail_bound = deep.tail_bound;
      if (deep.distance > tol) rep.all_within = false;
    }
    if (!row.exact_match) rep.all_exact = false;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

Json UrpReport::to_json(const Alphabet& alpha) const {
  Json jrows = Json::array();
  char buf[64];
  for (const auto& r : rows) {
    Json jr;
    jr["case"] = r.case_id;
    jr["letter"] = alpha.names[static_cast<size_t>(r.a)];
    jr["path"] = r.path;
    jr["value"] = r.value.str();
    jr["expected"] = r.expected.str();
    jr["exact_match"] = r.exact_match;
    std::snprintf(buf, sizeof buf, "%.3e", r.dist_sub[0]);
    jr["dist_subfractal_0"] = buf;
    std::snprintf(buf, sizeof buf, "%.3e", r.dist_sub[1]);
    jr["dist_subfractal_1"] = buf;
    std::snprintf(buf, sizeof buf, "%.3e", r.dist14_sub[0]);
    jr["dist_depth14_0"] = buf;
    std::snprintf(buf, sizeof buf, "%.3e", r.dist14_sub[1]);
    jr["dist_depth14_1"] = buf;
    jrows.push_back(jr);
  }
  Json j;
  j["rows"] = jrows;
  j["all_exact"] = all_exact;
  j["all_within_tol"] = all_within;
  j["tol"] = tol;
  return j;
}

// ---- boundary lemmas ----

BoundaryLemmasReport verify_boundary_lemmas(int depth, double tol) {
  if (depth < 10) throw std::invalid_argument("verify_boundary_lemmas: depth must be >= 10");
  BoundaryLemmasReport rep;
  const AyConstants& ay = AyConstants::get();
  Complex beta = ay.beta;
  Complex b2 = beta * beta;
  Complex z0 = ay.z0.embed_beta();
  Complex e1 = ay.kappa_end.embed_beta();

  std::vector<Complex> R = trib_cloud(depth);
  int kd = std::max(7, depth / 2);
  std::vector<Complex> Kp = kappa_grid(kd);  // K'
  std::vector<Complex> K;
  K.reserve(Kp.size());
  for (Complex z : Kp) K.push_back(z - z0);

  auto shifted = [](const std::vector<Complex>& v, Complex mul, Complex add) {
    std::vector<Complex> out;
    out.reserve(v.size());
    for (Complex z : v) out.push_back(mul * z + add);
    return out;
  };

  rep.sep_basic[0] = set_distance(R, shifted(R, 1.0, (b2 - 1.0) / 2.0));
  rep.sep_basic[1] = set_distance(Kp, shifted(R, 1.0, (b2 + 2.0 * beta + 3.0) / 2.0));
  rep.sep_basic[2] = set_distance(Kp, shifted(R, 1.0 / b2, 0.0));

  {
    KdTree2 tr(R);
    double d1 = 0, d2 = 0;
    for (Complex z : Kp) d1 = std::max(d1, tr.nearest(z));
    KdTree2 tr2(shifted(R, 1.0, 1.0 / beta));
    for (Complex z : Kp) d2 = std::max(d2, tr2.nearest(z));
    rep.subset_kprime[0] = d1;
    rep.subset_kprime[1] = d2;
  }

  // K = (kappa(1)-z0) - K ; K = b^-3 K u (b^-4 K + b^-3) u (b^-3 K + b^-3)
  rep.symmetry_residual = hausdorff(K, shifted(K, -1.0, e1));
  {
    std::vector<Complex> Kfine = kappa_grid(kd + 1);
    for (auto& z : Kfine) z -= z0;
    Complex ib = 1.0 / beta;
    Complex ib3 = ib * ib * ib, ib4 = ib3 * ib;
    std::vector<Complex> un = shifted(K, ib3, 0.0);
    auto add2 = shifted(K, ib4, ib3);
    auto add3 = shifted(K, ib3, ib3);
    un.insert(un.end(), add2.begin(), add2.end());
    un.insert(un.end(), add3.begin(), add3.end());
    rep.decomposition_residual = hausdorff(Kfine, un);
  }

  // rauzy3: K cap (b K + (b^2+1)/2) and K cap (b^2 K + (-b^2+1)/2) cluster at 0
  for (int which = 0; which < 2; ++which) {
    Complex mul = which == 0 ? beta : b2;
    Complex add = which == 0 ? (b2 + 1.0) / 2.0 : (-b2 + 1.0) / 2.0;
    auto B = shifted(K, mul, add);
    KdTree2 tb(B);
    double rad = -1;
    bool nonempty = false;
    for (Complex z : K)
      if (tb.nearest(z) < tol) {
        nonempty = true;
        rad = std::max(rad, std::abs(z));
      }
    rep.rauzy3_cluster_radius[which] = rad;
    rep.rauzy3_nonempty[which] = nonempty;
  }

  // rauzy2: (K - 2b^2-3b-4) cap (K + (-3b^2-4b-7)/2) is a unique point
  {
    auto A = shifted(K, 1.0, -2.0 * b2 - 3.0 * beta - 4.0);
    auto B = shifted(K, 1.0, (-3.0 * b2 - 4.0 * beta - 7.0) / 2.0);
    KdTree2 tb(B);
    std::vector<Complex> close;
    for (Complex z : A)
      if (tb.nearest(z) < tol) close.push_back(z);
    if (!close.empty()) {
      Complex mean = 0;
      for (Complex z : close) mean += z;
      mean /= static_cast<double>(close.size());
      double spread = 0;
      for (Complex z : close) spread = std::max(spread, std::abs(z - mean));
      rep.rauzy2_clusters = spread < 64 * tol ? 1 : 2;
      rep.rauzy2_point = mean;
    }
  }

  rep.pass = rep.sep_basic[0] > 0.05 && rep.sep_basic[1] > 0.05 && rep.sep_basic[2] > 0.05 &&
             rep.symmetry_residual < 1e-8 && rep.decomposition_residual < 1e-8 &&
             rep.rauzy3_nonempty[0] && rep.rauzy3_nonempty[1] &&
             rep.rauzy3_cluster_radius[0] < 0.05 && rep.rauzy3_cluster_radius[1] < 0.05 &&
             rep.rauzy2_clusters == 1;
  return rep;
}

Json BoundaryLemmasReport::to_json() const {
  Json j;
  j["basicrauzy_separations"] = sep_basic;
  j["kprime_subset_max_dist"] = subset_kprime;
  j["rauzy3_cluster_radii"] = rauzy3_cluster_radius;
  j["rauzy2_clusters"] = rauzy2_clusters;
  j["rauzy2_point"] = {rauzy2_point.real(), rauzy2_point.imag()};
  j["symmetry_residual"] = symmetry_residual;
  j["decomposition_residual"] = decomposition_residual;
  j["pass"] = pass;
  return j;
}

}  // namespace wander
