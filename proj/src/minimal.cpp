#include "wander/minimal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wander {

Word SeedLetters::awb() const {
  Word out;
  out.push_back(static_cast<uint8_t>(a));
  out.insert(out.end(), w.begin(), w.end());
  out.push_back(static_cast<uint8_t>(b));
  return out;
}

SeedLetters find_seed_letters(const Substitution& sigma, std::span<const Complex> gamma, int scan_budget) {
  SeedLetters s;
  int neg = -1, pos = -1;
  for (int a = 0; a < sigma.size(); ++a) {
    if (neg < 0 && gamma[static_cast<size_t>(a)].real() < 0) neg = a;
    if (pos < 0 && gamma[static_cast<size_t>(a)].real() > 0) pos = a;
  }
  if (neg < 0 || pos < 0)
    throw std::domain_error("find_seed_letters: Re(gamma) does not change sign");
  s.a = neg;
  s.b = pos;
  // shortest w with "a w b" a subword of some sigma^k image, smallest k first
  for (int k = 1; k <= scan_budget; ++k) {
    long best_len = -1;
    size_t best_pos = 0;
    Word best_img;
    for (Letter st = 0; st < sigma.size(); ++st) {
      Word img = sigma.apply_power(Word{static_cast<uint8_t>(st)}, k, 50'000'000);
      for (size_t i = 0; i < img.size(); ++i) {
        if (img[i] != s.a) continue;
        for (size_t j = i + 1; j < img.size(); ++j) {
          if (img[j] == static_cast<uint8_t>(s.a)) break;  // a closer 'a' will serve position j
          if (img[j] == static_cast<uint8_t>(s.b)) {
            long wl = static_cast<long>(j - i - 1);
            if (best_len < 0 || wl < best_len) {
              best_len = wl;
              best_pos = i;
              best_img = img;
            }
            break;
          }
        }
      }
    }
    if (best_len >= 0) {
      s.w.assign(best_img.begin() + static_cast<long>(best_pos) + 1,
                 best_img.begin() + static_cast<long>(best_pos) + 1 + best_len);
      s.k_found = k;
      return s;
    }
  }
  throw std::runtime_error("find_seed_letters: no occurrence a..b within scan budget");
}

long minimal_prefix(const Word& w, std::span<const Complex> weights) {
  double run = 0, best = 0;
  long arg = 0;
  for (size_t i = 0; i < w.size(); ++i) {
    run += weights[w[i]].real();
    if (run < best) {
      best = run;
      arg = static_cast<long>(i) + 1;
    }
  }
  return arg;
}

MinimalWindow minimal_window(const Substitution& sigma, std::span<const Complex> gamma, const SeedLetters& seed,
                             int n, Complex beta, size_t budget) {
  Complex beta0n = std::pow(beta / std::abs(beta), n);
  if (!(beta0n.real() > 0))
    throw std::invalid_argument("minimal_window: Re(beta0^n) must be positive (pick n with arg(beta0^n) near 0)");
  MinimalWindow mw;
  mw.seed = seed.awb();
  mw.exponent = n;
  Word w = sigma.apply_power(mw.seed, n, budget);
  mw.split = minimal_prefix(w, gamma);
  if (mw.split <= 0 || mw.split >= static_cast<long>(w.size()))
    throw std::runtime_error("minimal_window: degenerate split (one side empty)");
  mw.window.symbols = std::move(w);
  mw.window.origin = mw.split;
  // the split is a global running-sum minimum, so Re(gamma_k) >= 0 holds by
  // construction; verify_minimality re-checks against eps_min
  return mw;
}

MinimalityVerdict verify_minimality(const TwoSidedWindow& w, std::span<const Complex> gamma, double eps,
                                    int random_pairs, uint64_t rng_seed) {
  MinimalityVerdict v;
  const long lo = w.min_index(), hi = w.max_index() + 1;  // gamma_n defined for n in [lo, hi]

  // sampled two-sided inequality Re(gamma(w_n..w_{-1})) <= Re(gamma(w_n..w_m)):
  // the slack right-left equals Re(gamma_{m+1}), independent of n, so capture
  // gamma at the sampled positions during the same scan.
  std::mt19937_64 rng(rng_seed);
  std::vector<long> sample;
  for (int it = 0; it < random_pairs; ++it) {
    long n = lo < 0 ? lo + static_cast<long>(rng() % static_cast<uint64_t>(-lo)) : 0;  // n in [lo, -1]
    long m = n + static_cast<long>(rng() % static_cast<uint64_t>(hi - n + 1)) - 1;     // m in [n-1, hi-1]
    sample.push_back(m + 1);
  }
  std::sort(sample.begin(), sample.end());

  double worst = 0;  // gamma_0 = 0
  long worst_n = 0;
  double slack = std::numeric_limits<double>::infinity();
  auto visit = [&](long n, double val) {
    if (val < worst) {
      worst = val;
      worst_n = n;
    }
    auto range = std::equal_range(sample.begin(), sample.end(), n);
    if (range.first != range.second) slack = std::min(slack, val);
  };
  double run = 0;
  for (long n = 1; n <= hi; ++n) {  // forward side
    run += gamma[static_cast<size_t>(w.at(n - 1))].real();
    visit(n, run);
  }
  run = 0;
  for (long n = -1; n >= lo; --n) {  // backward side: gamma_n = -gamma(w_n..w_{-1})
    run -= gamma[static_cast<size_t>(w.at(n))].real();
    visit(n, run);
  }
  if (std::binary_search(sample.begin(), sample.end(), 0L)) slack = std::min(slack, 0.0);
  v.worst_value = worst;
  v.worst_n = worst_n;
  v.worst_pair_slack = slack;
  v.ok = worst >= -eps && slack >= -eps;
  return v;
}

GrowthReport growth_check(const TwoSidedWindow& w, std::span<const Complex> gamma, double rho, double alpha,
                          Complex beta, long range) {
  GrowthReport rep;
  rep.rho = rho;
  rep.rho_max = std::log(std::abs(beta)) / std::log(1.0 / alpha);
  if (!(rho > 0) || rho >= rep.rho_max + 1e-12)
    throw std::invalid_argument("growth_check: rho must lie in (0, rho_max)");
  long fwd = w.max_index() + 1, bwd = -w.min_index();
  if (range > 0) {
    fwd = std::min(fwd, range);
    bwd = std::min(bwd, range);
  }
  double best = std::numeric_limits<double>::infinity();
  long arg = 0;
  double run = 0;
  for (long n = 1; n <= fwd; ++n) {
    run += gamma[static_cast<size_t>(w.at(n - 1))].real();
    if (n < 2) continue;
    double r = run / std::pow(static_cast<double>(n), rho);
    if (r < best) {
      best = r;
      arg = n;
    }
  }
  run = 0;
  for (long n = 1; n <= bwd; ++n) {
    run -= gamma[static_cast<size_t>(w.at(-n))].real();
    if (n < 2) continue;
    double r = run / std::pow(static_cast<double>(n), rho);
    if (r < best) {
      best = r;
      arg = -n;
    }
  }
  rep.min_ratio = best;
  rep.argmin = arg;
  return rep;
}

std::vector<GoodDirectionRow> good_direction_certificate(std::span<const double> psi_thetas, Complex beta,
                                                         double theta, int k_max,
                                                         std::span<const double> a_factors) {
  std::vector<GoodDirectionRow> out;
  Complex beta0 = beta / std::abs(beta);
  for (double A : a_factors) {
    for (double pt : psi_thetas) {
      // Psi(e^{i theta} Gamma) = e^{-i theta} Psi(Gamma)
      double target = pt - theta;
      GoodDirectionRow row;
      row.a_factor = A;
      row.theta = target;
      double best = std::numeric_limits<double>::infinity();
      Complex b0k = 1.0;
      double ak = 1.0;
      for (int k = 1; k <= k_max; ++k) {
        b0k *= beta0;
        ak *= A;
        double d = std::abs(std::remainder(std::arg(b0k) - target, 2 * M_PI));
        if (ak * d < best) {
          best = ak * d;
          row.argmin_k = k;
        }
        if (ak > 1e300) break;
      }
      row.min_scaled = best;
      out.push_back(row);
    }
  }
  return out;
}

}  // namespace wander
