#pragma once
// Finite central windows of minimal sequences for gamma and the polynomial
// growth certificate for Re(gamma_n).

#include <random>

#include "wander/substitution.hpp"

namespace wander {

struct SeedLetters {
  Letter a = 0, b = 0;  // Re(gamma_a) < 0 < Re(gamma_b)
  Word w;               // a w b occurs in the subshift
  int k_found = 0;      // found inside sigma^k of some letter
  Word awb() const;
};

SeedLetters find_seed_letters(const Substitution& sigma, std::span<const Complex> gamma, int scan_budget = 8);

// index of the prefix minimizing the running Re-sum; ties -> shortest
long minimal_prefix(const Word& w, std::span<const Complex> weights);

struct MinimalWindow {
  TwoSidedWindow window;
  // construction log
  Word seed;
  int exponent = 0;
  long split = 0;       // index of the minimal prefix inside sigma^n(seed)
  double eps_min = 1e-9;
  long left_size() const { return window.origin; }
  long right_size() const { return static_cast<long>(window.symbols.size()) - window.origin; }
};

// window = sigma^n(awb) split at its minimal prefix; requires Re(beta0^n) > 0
MinimalWindow minimal_window(const Substitution& sigma, std::span<const Complex> gamma, const SeedLetters& seed,
                             int n, Complex beta, size_t budget = 200'000'000);

struct MinimalityVerdict {
  bool ok = false;
  long worst_n = 0;
  double worst_value = 0;       // min over n of Re(gamma_n)
  double worst_pair_slack = 0;  // min over sampled (n,m) of the two-sided inequality slack
};

MinimalityVerdict verify_minimality(const TwoSidedWindow& w, std::span<const Complex> gamma, double eps = 1e-9,
                                    int random_pairs = 200, uint64_t rng_seed = 12345);

struct GrowthReport {
  double min_ratio = 0;  // min over 2 <= |n| <= range of Re(gamma_n)/|n|^rho
  long argmin = 0;
  double rho = 0;
  double rho_max = 0;  // log|beta| / log(alpha^{-1})
};

GrowthReport growth_check(const TwoSidedWindow& w, std::span<const Complex> gamma, double rho, double alpha,
                          Complex beta, long range = -1 /* -1: the full window */);

struct GoodDirectionRow {
  double a_factor = 0;
  double theta = 0;       // the Psi candidate direction
  double min_scaled = 0;  // min over k <= k_max of A^k * dist(tau, beta0^k)
  int argmin_k = 0;
};

// bounded liminf certificate for "gamma is a good eigenvector"
std::vector<GoodDirectionRow> good_direction_certificate(std::span<const double> psi_thetas, Complex beta,
                                                         double theta, int k_max,
                                                         std::span<const double> a_factors);

}  // namespace wander
