#pragma once
// The cubic Arnoux-Yoccoz instance: the map, the 9-letter substitution,
// eigendata, tribonacci fractal and boundary parametrization, IFS
// verification and the unique-representation witness catalogue.

#include <array>

#include "wander/fractal.hpp"
#include "wander/iem.hpp"

namespace wander {

struct AyConstants {
  Alphabet letters;  // "1".."9"
  Substitution sigma;
  IntMatrix M;
  std::vector<CubicNumber> gamma_exact;   // eigenvector for beta, exact
  std::vector<Complex> gamma;             // beta embedding
  std::vector<CubicNumber> lambda_exact;  // Perron lengths of M^t, sum 1
  std::vector<double> lambda;
  double alpha = 0;
  Complex beta{};
  Iem T;                         // the A-Y map as a 10-interval exchange
  CodingPartition partition;     // the 9-letter coding partition
  std::vector<int> induced_letters;  // letters carried by the induced pieces on [0,alpha)
  CubicNumber z0;          // beta^{-4}/(1-beta^{-3}) = (-b^2-2b-3)/2
  CubicNumber kappa_end;   // kappa(1)-z0 = (-b^2-2b-1)/2

  // validated singleton; construction checks every transcription identity
  static const AyConstants& get();
};

double ay_map(double t);
const CodingPartition& ay_partition();

// exhaustive reconstruction of the partition ordering (slow path, used by
// tests); returns letters in position order for every valid ordering
std::vector<std::vector<int>> ay_partition_search();

// default gamma context for theta: gamma = e^{i theta} * Gamma
FractalContext ay_context(double theta = 0.0);

// ---- tribonacci fractal ----

// r((a_m)) = sum_{m>=3} beta^{-m} a_{m-2}; digits must avoid "111"
Complex trib_value(const std::vector<int>& digits);
bool trib_digits_valid(const std::vector<int>& digits);
// all no-111 digit strings of length len, as values (deduped)
std::vector<Complex> trib_cloud(int len);

// kappa(t) via depth-d composition of the three affine maps on z0
Complex kappa(double t, int depth);
// closed triadic sample of K' = kappa([0,1]) at depth d (2*3^d points, deduped)
std::vector<Complex> kappa_grid(int depth);

struct BoundarySegment {
  int beta_pow = 0;       // scale = beta^k
  CubicNumber translate;  // exact
};

struct BoundaryCurve {
  Letter a = 0;
  std::vector<BoundarySegment> segments;
  // sampled polyline (segments in order, each sampled along the kappa grid)
  std::vector<std::vector<Complex>> polylines(int depth) const;
  // consecutive segments share exactly one endpoint (exact field check)
  bool jordan_chain() const;
};

BoundaryCurve boundary_curve(Letter a);

// ---- verification certificates ----

struct IfsReport {
  int depth = 0;
  double c_est = 0;                   // max |z| over all clouds at the estimation depth
  int c_depth = 16;
  std::array<double, 6> residual{};        // equal-depth symmetric Hausdorff per equation
  std::array<double, 6> residual_prev{};   // at depth-2
  std::array<double, 3> equal_residual{};  // F2=F3, F5=F6, F8=F9 at depth
  std::array<double, 6> matched_exact{};   // left at depth vs right at depth-1 (expect ~0)
  double bound = 0;                        // c_est * |beta|^-depth + tol
  bool pass = false;
  int failing_equation = -1;
  Json to_json() const;
};

IfsReport verify_ifs(int depth, double tol = 1e-9);

struct UrpWitnessRow {
  int case_id = 0;       // paper cases (i)..(vii) as 1..7
  Letter a = 0;
  std::string path;      // printable chain
  CubicNumber value;     // exact evaluated
  CubicNumber expected;  // exact from the closed form
  bool exact_match = false;
  double dist_sub[2] = {0, 0};     // certified deep distance to each subfractal
  double dist14_sub[2] = {0, 0};   // literal depth-14 cloud distances (reported)
  double tail_bound = 0;
};

struct UrpReport {
  std::vector<UrpWitnessRow> rows;  // 14
  bool all_exact = false;
  bool all_within = false;  // deep distances <= tol
  double tol = 1e-6;
  Json to_json(const Alphabet& alpha) const;
};

UrpReport verify_urp_witnesses(int deep_depth = 60, double tol = 1e-6);

struct BoundaryLemmasReport {
  double sep_basic[3] = {0, 0, 0};   // basicrauzy (i)-(iii) sampled separations
  double subset_kprime[2] = {0, 0};  // K' inside R and inside R+beta^{-1} (max dist)
  double rauzy3_cluster_radius[2] = {-1, -1};  // close pairs cluster around 0
  bool rauzy3_nonempty[2] = {false, false};
  int rauzy2_clusters = 0;
  Complex rauzy2_point{};
  double decomposition_residual = 0;  // K = b^-3 K u (b^-4 K + b^-3) u (b^-3 K + b^-3)
  double symmetry_residual = 0;       // K = (kappa(1)-z0) - K
  bool pass = false;
  Json to_json() const;
};

BoundaryLemmasReport verify_boundary_lemmas(int depth, double tol = 1e-3);

}  // namespace wander
