#pragma once
// From a minimal window to the atomic measure, the monotone maps g and h,
// the synthesized affine interval exchange and the wandering-interval
// verification.

#include "wander/iem.hpp"
#include "wander/minimal.hpp"

namespace wander {

struct LocateResult {
  double lo = 0, hi = 0;  // bracketing interval for the point with the given itinerary
  double mid = 0, width = 0;
  long symbols = 0;
  int pieces = 1;  // surviving work-list intervals (1 expected)
};

// Nested-interval refinement: the set of t whose coding itinerary matches
// window[from .. from+count-1] starting at time 0. Empty intersection
// throws std::runtime_error (the window is not a valid itinerary).
LocateResult locate_point(const Iem& T, const CodingPartition& partition, const TwoSidedWindow& window,
                          long from = 0, long count = -1);

struct AtomicMeasure {
  double base = 0;              // t
  long n_lo = 0, n_hi = 0;      // atoms at T^n(t), n_lo <= n <= n_hi (0 inside)
  std::vector<double> pos;      // index n - n_lo
  std::vector<double> weight;   // exp(-Re gamma_n), unnormalized
  std::vector<uint8_t> letter;  // coding letter of each atom
  double K = 0;                 // sum of weights

  long count() const { return n_hi - n_lo + 1; }
  double weight_at(long n) const { return weight[static_cast<size_t>(n - n_lo)]; }
  double pos_at(long n) const { return pos[static_cast<size_t>(n - n_lo)]; }
};

// Builds the truncated atomic measure from the window (certified |n| <= N).
// Atoms whose normalized weight would fall below gap_floor are dropped by
// shrinking to the largest contiguous block around n = 0 (their gaps would
// be narrower than double-precision resolution). Orbit letters are
// cross-checked against the window; a mismatch throws.
AtomicMeasure build_measure(const Iem& T, const CodingPartition& partition, const MinimalWindow& window,
                            std::span<const Complex> gamma, long N, double gap_floor = 1e-12);

struct ConjugacyPair {
  // atoms sorted by position
  std::vector<double> x;       // atom positions
  std::vector<double> q;       // normalized weights
  std::vector<long> orbit_n;   // orbit index of each sorted atom
  std::vector<double> cum;     // cum[i] = sum_{j<i} q[j]; gap i = [cum[i], cum[i]+q[i])
  std::vector<long> rank_of_n; // inverse: sorted rank of orbit index n+N

  double g(double t) const;  // mu([0,t))
  double h(double y) const;  // monotone pseudo-inverse, constant on gaps
  long gap_of(double y) const;
};

ConjugacyPair build_conjugacy(const AtomicMeasure& mu);

struct SynthesisResult {
  AffineIem f;
  // per-letter slope residuals: max |slope/exp(-Re gamma_a) - 1|
  std::vector<double> slope_rel_err;
  double max_slope_rel_err = 0;
  double semi_conjugacy_residual = 0;  // max over atoms |h(f(y)) - T(h(y))|
  int wrap_piece = -1;  // index of the unlabeled truncation-boundary piece
  // conditioning diagnostics: near-resolution gaps make affine pieces
  // ill-conditioned; gap_floor in build_measure keeps these bounded
  double smallest_gap = 0;
  double smallest_slope = 0, largest_slope = 0;
};

SynthesisResult synthesize_affine(const Iem& T, const AtomicMeasure& mu, const ConjugacyPair& conj,
                                  std::span<const Complex> gamma);

struct WanderingReport {
  long n_orbit = 0;
  bool disjoint = false;
  long overlap_pair[2] = {0, 0};
  double total_length = 0;
  double max_collapse_residual = 0;  // |h(f^n J) - T^n(h(J))| over the orbit
  double max_length_residual = 0;    // |f^n(J)| vs |J| * product of slopes
  bool pass = false;
};

// iterates the gap J (the y-interval of the atom with the largest weight)
WanderingReport verify_wandering(const AffineIem& f, const Iem& T, const ConjugacyPair& conj, long n_orbit);

double slope_orthogonality(std::span<const double> ell, std::span<const double> lambda);

}  // namespace wander
