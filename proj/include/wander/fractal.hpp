#pragma once
// The fractals F_a: truncated clouds, directional minima v_a, extreme
// points, subfractals, Psi directions, continuation / exponential
// approximation checks, and limit-extreme-point construction by reversing
// prefix-suffix chains.

#include "wander/substitution.hpp"

namespace wander {

constexpr int kMaxFractalDepth = 64;

struct FractalContext {
  Substitution sigma;
  std::vector<Complex> gamma;
  Complex beta{}, beta0{}, ibeta{};
  double abs_beta = 0;

  struct Dec {
    Word p;
    Letter c = 0;
    Word s;
    Complex gamma_p{};
  };
  std::vector<std::vector<Dec>> decs;  // per letter
  double gmax = 0;                     // max |gamma(p)| over decomposition prefixes
  std::vector<Complex> ibp;            // ibeta^m, m = 0..kMaxFractalDepth

  FractalContext(Substitution s, std::vector<Complex> g, Complex b);

  // |sum_{m>k} beta^{-m} gamma(p_m)| <= tail_max(k)
  double tail_max(int k) const { return gmax * std::pow(abs_beta, -(k + 1)) / (1.0 - 1.0 / abs_beta); }
};

// value of a finite or eventually periodic chain
Complex value_of_path(const FractalContext& ctx, const PssPath& path);
// exact variant (gamma entries in the cubic field, beta = the field generator)
CubicNumber value_of_path_exact(const Substitution& sigma, std::span<const CubicNumber> gamma, const PssPath& path);

struct CloudPoint {
  Complex z{};
  Word choices;  // decomposition index per level (representative path)
};

struct FractalCloud {
  Letter a = 0;
  int depth = 0;
  std::vector<CloudPoint> pts;  // deduped (1e-12), sorted by (re, im)
};

// exact enumeration with path provenance; throws std::length_error over budget
FractalCloud cloud(const FractalContext& ctx, Letter a, int n, size_t budget = 20'000'000);
// fast memoizable point set without provenance
std::vector<Complex> cloud_points(const FractalContext& ctx, Letter a, int n);

PssPath path_from_choices(const FractalContext& ctx, Letter a, const Word& choices);

struct ExtremeReport {
  Letter a = 0;
  int depth = 0;
  Complex tau{};
  double v = 0;  // v_a^(n)(tau)
  struct Argmin {
    double value = 0;
    Complex z{};
    Word choices;
    int first_triple = 0;  // subfractal label (p1,c1,s1) as decomposition index
  };
  std::vector<Argmin> argmins;  // all within cluster_tol of v
  double cluster_tol = 1e-9;
  Json to_json(const FractalContext& ctx) const;
};

struct VminOptions {
  double cluster_tol = 1e-9;
  bool prune = true;        // false: exhaustive enumeration (oracle)
  int first_triple = -1;    // >=0: restrict to one subfractal
};

ExtremeReport v_min(const FractalContext& ctx, Letter a, int n, Complex tau, const VminOptions& opts = {});

struct ContinuationCheck {
  bool ok = false;
  double max_shift_residual = 0;     // argmin optimality at depth n-1
  double max_identity_residual = 0;  // the displayed value identity
  int failing_argmin = -1;
};

ContinuationCheck continuation_check(const FractalContext& ctx, const ExtremeReport& report, double tol = 1e-9);

struct ExpApproxRow {
  int n = 0;
  double v = 0;
  double delta = 0;  // |v^(n) - v^(n_max)|
  double scaled = 0; // delta * |beta|^n
};

struct ExpApproxReport {
  std::vector<ExpApproxRow> rows;
  double c_est = 0;  // max of scaled
  bool bounded = false;
};

ExpApproxReport exp_approx_check(const FractalContext& ctx, Letter a, Complex tau, int n_max);

struct PsiCandidate {
  double theta = 0;      // refined crossing direction
  int label1 = 0, label2 = 0;
  double gap = 0;        // |v_sub1 - v_sub2| at theta
  double separation = 0; // D = min distance between the two argmin clusters
};

std::vector<PsiCandidate> psi_scan(const FractalContext& ctx, Letter a, int grid, int depth, double gap_tol = 1e-7);

// Reverses the first k entries of a prefix-suffix chain (p_m,c_m,s_m)_{0..N-1}
// into an element of S_{c_k} (k < N; for k == N the parent is recovered from
// the substitution table and must be unique).
PssPath reverse_prefix_suffix(const Substitution& sigma, const std::vector<PssTriple>& chain, int k);

struct DerivativeCheck {
  double right_limit = 0, left_limit = 0;    // -Im(tau e+-)
  std::vector<double> right_fd, left_fd;     // finite differences per h
  double right_residual = 0, left_residual = 0;  // at the smallest h
};

DerivativeCheck one_sided_derivative_check(const FractalContext& ctx, Letter a, Complex tau, int n,
                                           std::span<const double> h_list);

struct NearestPointResult {
  double distance = 0;   // min over the depth-`depth` cloud
  double tail_bound = 0; // the true set distance is >= distance - tail_bound
};

// branch-and-bound nearest point of F_a (optionally one subfractal) to z
NearestPointResult nearest_point(const FractalContext& ctx, Letter a, int first_triple, Complex z, int depth);

// ---- plane geometry helpers ----

struct KdTree2 {
  explicit KdTree2(std::vector<Complex> pts);
  double nearest(Complex q) const;  // distance to the closest stored point

 private:
  struct Node {
    Complex p;
    int left = -1, right = -1;
    bool by_x = true;
  };
  std::vector<Node> nodes_;
  int root_ = -1;
  int build(std::vector<Complex>& pts, int lo, int hi, bool by_x);
  void query(int node, Complex q, double& best) const;
};

double hausdorff(const std::vector<Complex>& a, const std::vector<Complex>& b);
double set_distance(const std::vector<Complex>& a, const std::vector<Complex>& b);  // min pairwise

}  // namespace wander
