#include "wander/wandering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wander {

LocateResult locate_point(const Iem& T, const CodingPartition& partition, const TwoSidedWindow& window,
                          long from, long count) {
  if (count < 0) count = window.max_index() - from + 1;
  if (from < window.min_index() || from + count - 1 > window.max_index())
    throw std::out_of_range("locate_point: requested range outside window");
  constexpr double kEps = 1e-15;

  struct Piece {
    double lo, hi, c;  // T^k = +c on [lo, hi)
  };
  std::vector<double> breaks;
  {
    double x = 0;
    for (int k = 0; k < T.size(); ++k) {
      x += T.lengths[static_cast<size_t>(T.pi0[static_cast<size_t>(k)])];
      if (x < T.total() - kEps) breaks.push_back(x);
    }
  }
  std::vector<Piece> cur{{0.0, T.total(), 0.0}};
  for (long m = 0; m < count; ++m) {
    Letter want = window.at(from + m);
    // cell of the coding partition for this letter may be several cells; use all
    std::vector<Piece> next;
    for (const Piece& p : cur) {
      for (size_t cell = 0; cell + 1 < partition.lefts.size(); ++cell) {
        if (partition.letters[cell] != want) continue;
        double lo = std::max(p.lo, partition.lefts[cell] - p.c);
        double hi = std::min(p.hi, partition.lefts[cell + 1] - p.c);
        if (hi - lo <= kEps) continue;
        // split at T breakpoints and advance one step
        std::vector<double> cuts{lo};
        for (double b : breaks) {
          double pre = b - p.c;
          if (pre > lo + kEps && pre < hi - kEps) cuts.push_back(pre);
        }
        std::sort(cuts.begin(), cuts.end());
        cuts.push_back(hi);
        for (size_t i = 0; i + 1 < cuts.size(); ++i) {
          double mid = 0.5 * (cuts[i] + cuts[i + 1]) + p.c;
          double d = T.delta[static_cast<size_t>(T.letter_at(mid))];
          next.push_back({cuts[i], cuts[i + 1], p.c + d});
        }
      }
    }
    if (next.empty()) throw std::runtime_error("locate_point: empty intersection (invalid itinerary)");
    if (next.size() > 64) throw std::runtime_error("locate_point: work list exploded (inconsistent partition)");
    cur = std::move(next);
  }
  LocateResult res;
  res.symbols = count;
  res.pieces = static_cast<int>(cur.size());
  res.lo = std::numeric_limits<double>::infinity();
  res.hi = -res.lo;
  for (const Piece& p : cur) {
    res.lo = std::min(res.lo, p.lo);
    res.hi = std::max(res.hi, p.hi);
  }
  res.mid = 0.5 * (res.lo + res.hi);
  res.width = res.hi - res.lo;
  return res;
}

AtomicMeasure build_measure(const Iem& T, const CodingPartition& partition, const MinimalWindow& window,
                            std::span<const Complex> gamma, long N, double gap_floor) {
  const TwoSidedWindow& w = window.window;
  if (w.min_index() > -N || w.max_index() < N)
    throw std::invalid_argument("build_measure: window does not certify |n| <= N");

  // weights exp(-Re gamma_n), running sums over the window letters
  std::vector<double> wt(static_cast<size_t>(2 * N + 1));
  wt[static_cast<size_t>(N)] = 1.0;  // gamma_0 = 0
  double run = 0;
  for (long n = 1; n <= N; ++n) {
    run += gamma[static_cast<size_t>(w.at(n - 1))].real();
    if (run < -1e-6) throw std::domain_error("build_measure: window is not minimal (weights not summable)");
    wt[static_cast<size_t>(N + n)] = std::exp(-run);
  }
  run = 0;
  for (long n = -1; n >= -N; --n) {
    run -= gamma[static_cast<size_t>(w.at(n))].real();
    if (run < -1e-6) throw std::domain_error("build_measure: window is not minimal (weights not summable)");
    wt[static_cast<size_t>(N + n)] = std::exp(-run);
  }
  double k_full = 0;
  for (double v : wt) k_full += v;

  // drop atoms whose gap would be below double-precision resolution:
  // keep the largest contiguous block around 0 with weight/K >= gap_floor
  AtomicMeasure mu;
  mu.n_lo = 0;
  mu.n_hi = 0;
  while (mu.n_hi < N && wt[static_cast<size_t>(N + mu.n_hi + 1)] >= gap_floor * k_full) ++mu.n_hi;
  while (mu.n_lo > -N && wt[static_cast<size_t>(N + mu.n_lo - 1)] >= gap_floor * k_full) --mu.n_lo;

  long m = mu.count();
  mu.weight.resize(static_cast<size_t>(m));
  mu.letter.resize(static_cast<size_t>(m));
  mu.pos.resize(static_cast<size_t>(m));
  mu.K = 0;
  for (long n = mu.n_lo; n <= mu.n_hi; ++n) {
    mu.weight[static_cast<size_t>(n - mu.n_lo)] = wt[static_cast<size_t>(N + n)];
    mu.K += wt[static_cast<size_t>(N + n)];
  }

  // base point: a point of the block itinerary cylinder, pushed forward.
  // If the chosen point's orbit clips a coding boundary (the discontinuity
  // orbit case), re-seed from other points of the cylinder before giving up.
  LocateResult loc = locate_point(T, partition, w, mu.n_lo, m);
  long bad_at = 0;
  for (double frac : {0.5, 0.37, 0.71, 0.23, 0.89}) {
    double x = loc.lo + frac * (loc.hi - loc.lo);
    bool ok = true;
    for (long j = 0; j < m; ++j) {
      Letter got = partition.letter_at(x);
      Letter want = w.at(mu.n_lo + j);
      if (got != want) {
        ok = false;
        bad_at = mu.n_lo + j;
        break;
      }
      mu.pos[static_cast<size_t>(j)] = x;
      mu.letter[static_cast<size_t>(j)] = static_cast<uint8_t>(want);
      if (j + 1 < m) x = T.evaluate(x);
    }
    if (ok) {
      mu.base = mu.pos_at(0);
      return mu;
    }
  }
  throw std::runtime_error("build_measure: orbit letter mismatch at n=" + std::to_string(bad_at) +
                           " for every candidate seed in the cylinder");
}

ConjugacyPair build_conjugacy(const AtomicMeasure& mu) {
  ConjugacyPair c;
  long m = mu.count();
  std::vector<long> order(static_cast<size_t>(m));
  for (long i = 0; i < m; ++i) order[static_cast<size_t>(i)] = i;
  std::sort(order.begin(), order.end(),
            [&](long a, long b) { return mu.pos[static_cast<size_t>(a)] < mu.pos[static_cast<size_t>(b)]; });
  c.x.resize(static_cast<size_t>(m));
  c.q.resize(static_cast<size_t>(m));
  c.orbit_n.resize(static_cast<size_t>(m));
  c.rank_of_n.assign(static_cast<size_t>(m), 0);
  for (long r = 0; r < m; ++r) {
    long j = order[static_cast<size_t>(r)];
    c.x[static_cast<size_t>(r)] = mu.pos[static_cast<size_t>(j)];
    c.q[static_cast<size_t>(r)] = mu.weight[static_cast<size_t>(j)] / mu.K;
    c.orbit_n[static_cast<size_t>(r)] = j + mu.n_lo;
    c.rank_of_n[static_cast<size_t>(j)] = r;
  }
  for (long r = 0; r + 1 < m; ++r)
    if (!(c.x[static_cast<size_t>(r)] < c.x[static_cast<size_t>(r + 1)]))
      throw std::runtime_error("build_conjugacy: atom positions are not distinct");
  c.cum.resize(static_cast<size_t>(m) + 1);
  c.cum[0] = 0;
  for (long r = 0; r < m; ++r) c.cum[static_cast<size_t>(r + 1)] = c.cum[static_cast<size_t>(r)] + c.q[static_cast<size_t>(r)];
  c.cum.back() = 1.0;
  return c;
}

double ConjugacyPair::g(double t) const {
  auto it = std::lower_bound(x.begin(), x.end(), t);
  long i = std::distance(x.begin(), it);  // atoms with x < t
  return i == 0 ? 0.0 : cum[static_cast<size_t>(i)];
}

long ConjugacyPair::gap_of(double y) const {
  auto it = std::upper_bound(cum.begin(), cum.end(), y);
  long i = std::distance(cum.begin(), it) - 1;
  if (i < 0) i = 0;
  if (i >= static_cast<long>(q.size())) i = static_cast<long>(q.size()) - 1;
  return i;
}

double ConjugacyPair::h(double y) const { return x[static_cast<size_t>(gap_of(y))]; }

SynthesisResult synthesize_affine(const Iem& T, const AtomicMeasure& mu, const ConjugacyPair& conj,
                                  std::span<const Complex> gamma) {
  SynthesisResult out;
  long m = mu.count();
  // raw pieces: gap of atom n -> gap of atom n+1 (wrap for n = n_hi)
  std::vector<AffinePiece> raw(static_cast<size_t>(m));
  for (long r = 0; r < m; ++r) {
    long n = conj.orbit_n[static_cast<size_t>(r)];
    long jr = n == mu.n_hi ? conj.rank_of_n[0] : conj.rank_of_n[static_cast<size_t>(n + 1 - mu.n_lo)];
    AffinePiece p;
    p.lo = conj.cum[static_cast<size_t>(r)];
    p.hi = conj.cum[static_cast<size_t>(r + 1)];
    p.slope = conj.q[static_cast<size_t>(jr)] / conj.q[static_cast<size_t>(r)];
    p.intercept = conj.cum[static_cast<size_t>(jr)] - p.slope * p.lo;
    p.letter = n == mu.n_hi ? -1 : mu.letter[static_cast<size_t>(n - mu.n_lo)];
    raw[static_cast<size_t>(r)] = p;
  }
  // merge consecutive gaps lying on the same affine branch
  std::vector<AffinePiece>& pieces = out.f.pieces;
  for (const AffinePiece& p : raw) {
    if (!pieces.empty()) {
      AffinePiece& q = pieces.back();
      bool same = q.letter == p.letter && std::abs(q.slope - p.slope) < 1e-12 * (1 + std::abs(q.slope)) &&
                  std::abs((q.slope * p.lo + q.intercept) - (p.slope * p.lo + p.intercept)) < 1e-12;
      if (same) {
        q.hi = p.hi;
        continue;
      }
    }
    pieces.push_back(p);
  }
  // slope residuals per letter
  size_t nl = gamma.size();
  out.slope_rel_err.assign(nl, 0.0);
  for (size_t i = 0; i < pieces.size(); ++i) {
    const AffinePiece& p = pieces[i];
    if (p.letter < 0) {
      out.wrap_piece = static_cast<int>(i);
      continue;
    }
    double want = std::exp(-gamma[static_cast<size_t>(p.letter)].real());
    double rel = std::abs(p.slope / want - 1.0);
    out.slope_rel_err[static_cast<size_t>(p.letter)] = std::max(out.slope_rel_err[static_cast<size_t>(p.letter)], rel);
    out.max_slope_rel_err = std::max(out.max_slope_rel_err, rel);
  }
  // conditioning diagnostics
  out.smallest_gap = std::numeric_limits<double>::infinity();
  out.smallest_slope = std::numeric_limits<double>::infinity();
  for (const AffinePiece& p : raw) {
    out.smallest_gap = std::min(out.smallest_gap, p.hi - p.lo);
    out.smallest_slope = std::min(out.smallest_slope, p.slope);
    out.largest_slope = std::max(out.largest_slope, p.slope);
  }
  // semi-conjugacy residual at atoms
  for (long n = mu.n_lo; n < mu.n_hi; ++n) {
    long r = conj.rank_of_n[static_cast<size_t>(n - mu.n_lo)];
    double y = conj.cum[static_cast<size_t>(r)] + 0.5 * conj.q[static_cast<size_t>(r)];
    double hy = conj.h(y);
    double res = std::abs(conj.h(out.f.evaluate(y)) - T.evaluate(hy));
    out.semi_conjugacy_residual = std::max(out.semi_conjugacy_residual, res);
  }
  return out;
}

WanderingReport verify_wandering(const AffineIem& f, const Iem& T, const ConjugacyPair& conj, long n_orbit) {
  WanderingReport rep;
  rep.n_orbit = n_orbit;
  // the largest gap and its orbit-index window
  long m = static_cast<long>(conj.q.size());
  long n_lo = conj.orbit_n[0], n_hi = conj.orbit_n[0];
  long r0 = 0;
  for (long r = 0; r < m; ++r) {
    n_lo = std::min(n_lo, conj.orbit_n[static_cast<size_t>(r)]);
    n_hi = std::max(n_hi, conj.orbit_n[static_cast<size_t>(r)]);
    if (conj.q[static_cast<size_t>(r)] > conj.q[static_cast<size_t>(r0)]) r0 = r;
  }
  long n0 = conj.orbit_n[static_cast<size_t>(r0)];
  if (n0 - n_orbit < n_lo || n0 + n_orbit > n_hi)
    throw std::invalid_argument("verify_wandering: orbit exceeds the measure truncation");

  // f^n(J) is the gap of atom n0+n; check the gaps are pairwise distinct
  // (distinct maximal gaps are disjoint exactly) and sum their lengths.
  std::vector<long> ranks;
  rep.disjoint = true;
  for (long n = -n_orbit; n <= n_orbit; ++n) {
    long r = conj.rank_of_n[static_cast<size_t>(n0 + n - n_lo)];
    ranks.push_back(r);
    rep.total_length += conj.q[static_cast<size_t>(r)];
  }
  {
    auto sorted = ranks;
    std::sort(sorted.begin(), sorted.end());
    for (size_t i = 0; i + 1 < sorted.size(); ++i)
      if (sorted[i] == sorted[i + 1]) {
        rep.disjoint = false;
        rep.overlap_pair[0] = sorted[i];
        rep.overlap_pair[1] = sorted[i + 1];
      }
  }

  // cross-checks: h collapses each iterate to T^n(h(J)), and iterating the
  // interval endpoints through the assembled map reproduces gap lengths.
  // Endpoint iteration amplifies rounding by the weight ratio along the
  // orbit, so the length residual is reported, not gated at 1e-13.
  long rstart = ranks.front();
  double lo = conj.cum[static_cast<size_t>(rstart)], hi = lo + conj.q[static_cast<size_t>(rstart)];
  double x = conj.h(0.5 * (lo + hi));
  for (long k = 0; k <= 2 * n_orbit; ++k) {
    long r = ranks[static_cast<size_t>(k)];
    rep.max_collapse_residual =
        std::max(rep.max_collapse_residual, std::abs(conj.x[static_cast<size_t>(r)] - x));
    rep.max_length_residual = std::max(rep.max_length_residual, std::abs((hi - lo) - conj.q[static_cast<size_t>(r)]));
    if (k == 2 * n_orbit) break;
    const AffinePiece* piece = nullptr;
    double mid = conj.cum[static_cast<size_t>(r)] + 0.5 * conj.q[static_cast<size_t>(r)];
    for (const auto& p : f.pieces)
      if (mid >= p.lo && mid < p.hi) {
        piece = &p;
        break;
      }
    if (!piece) throw std::runtime_error("verify_wandering: gap escapes the affine pieces");
    double nlo = piece->slope * lo + piece->intercept;
    double nhi = piece->slope * hi + piece->intercept;
    lo = nlo;
    hi = nhi;
    x = T.evaluate(x);
  }
  rep.pass = rep.disjoint && rep.total_length < 1.0 + 1e-12 && rep.max_collapse_residual <= 1e-9;
  return rep;
}

double slope_orthogonality(std::span<const double> ell, std::span<const double> lambda) {
  if (ell.size() != lambda.size()) throw std::invalid_argument("slope_orthogonality: size mismatch");
  double s = 0;
  for (size_t i = 0; i < ell.size(); ++i) {
    if (!(ell[i] > 0)) throw std::domain_error("slope_orthogonality: slopes must be positive");
    s += std::log(ell[i]) * lambda[i];
  }
  return std::abs(s);
}

}  // namespace wander
