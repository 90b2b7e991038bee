#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "wander/ay.hpp"
#include "wander/minimal.hpp"

using namespace wander;

TEST_CASE("find_seed_letters") {
  const AyConstants& ay = AyConstants::get();
  SeedLetters s = find_seed_letters(ay.sigma, ay.gamma);
  CHECK(s.a == 0);  // Re(gamma_1) ~ -0.4196
  CHECK(s.b == 1);  // Re(gamma_2) ~ +0.7718
  CHECK(ay.gamma[0].real() == doctest::Approx(-0.419643).epsilon(1e-5));
  CHECK(ay.gamma[1].real() == doctest::Approx(0.771845).epsilon(1e-5));
  CHECK(s.k_found <= 6);
  // the occurrence word really occurs: a w b is a subword of sigma^k of some letter
  Word awb = s.awb();
  bool found = false;
  for (Letter st = 0; st < 9 && !found; ++st) {
    Word img = ay.sigma.apply_power(Word{static_cast<uint8_t>(st)}, s.k_found);
    for (size_t i = 0; i + awb.size() <= img.size() && !found; ++i)
      if (std::equal(awb.begin(), awb.end(), img.begin() + static_cast<long>(i))) found = true;
  }
  CHECK(found);

  // all-positive weights: precondition violation
  std::vector<Complex> pos{{1, 0}, {2, 0}};
  Alphabet two;
  two.names = {"a", "b"};
  Substitution fib(two, {{0, 1}, {0}});
  CHECK_THROWS_AS(find_seed_letters(fib, pos), std::domain_error);
}

TEST_CASE("minimal_prefix") {
  const AyConstants& ay = AyConstants::get();
  SUBCASE("all-positive weights: the empty prefix wins") {
    std::vector<Complex> pos{{1, 0}, {2, 0}};
    CHECK(minimal_prefix(Word{0, 1, 0}, pos) == 0);
  }
  SUBCASE("word 12 with the A-Y gamma splits after the first letter") {
    CHECK(minimal_prefix(Word{0, 1}, ay.gamma) == 1);
  }
  SUBCASE("running-sum oracle on sigma^3(1)") {
    Word w = ay.sigma.apply_power(Word{0}, 3);
    long got = minimal_prefix(w, ay.gamma);
    double run = 0, best = 0;
    long arg = 0;
    for (size_t i = 0; i < w.size(); ++i) {
      run += ay.gamma[w[i]].real();
      if (run < best) {
        best = run;
        arg = static_cast<long>(i) + 1;
      }
    }
    CHECK(got == arg);
  }
}

TEST_CASE("minimal_window") {
  const AyConstants& ay = AyConstants::get();
  SeedLetters seed = find_seed_letters(ay.sigma, ay.gamma);
  SUBCASE("n = 0: the seed itself split at its minimal prefix") {
    MinimalWindow mw = minimal_window(ay.sigma, ay.gamma, seed, 0, ay.beta);
    CHECK(mw.window.symbols == seed.awb());
    CHECK(mw.split == minimal_prefix(seed.awb(), ay.gamma));
    CHECK(mw.left_size() >= 1);
    CHECK(mw.right_size() >= 1);
  }
  SUBCASE("n = 17: certified minimal with both sides substantial") {
    MinimalWindow mw = minimal_window(ay.sigma, ay.gamma, seed, 17, ay.beta);
    CHECK(mw.left_size() >= 1);
    CHECK(mw.right_size() >= 1);
    MinimalityVerdict v = verify_minimality(mw.window, ay.gamma);
    CHECK(v.ok);
    CHECK(v.worst_value >= -1e-9);
    CHECK(v.worst_pair_slack >= -1e-9);
  }
  SUBCASE("Re(beta0^n) <= 0 violates the precondition") {
    CHECK_THROWS_AS(minimal_window(ay.sigma, ay.gamma, seed, 1, ay.beta), std::invalid_argument);
  }
  SUBCASE("valid exponents give windows agreeing on a large central block") {
    MinimalWindow w17 = minimal_window(ay.sigma, ay.gamma, seed, 17, ay.beta);
    MinimalWindow w20 = minimal_window(ay.sigma, ay.gamma, seed, 20, ay.beta);
    long left = std::min(w17.left_size(), w20.left_size());
    long right = std::min(w17.right_size(), w20.right_size());
    long agree_l = 0, agree_r = 0;
    while (agree_l < left && w17.window.at(-agree_l - 1) == w20.window.at(-agree_l - 1)) ++agree_l;
    while (agree_r < right && w17.window.at(agree_r) == w20.window.at(agree_r)) ++agree_r;
    CHECK(agree_l >= 10000);
    CHECK(agree_r >= 10000);
  }
  SUBCASE("side lengths are nondecreasing along the subsequence") {
    long pl = 0, pr = 0;
    for (int n : {14, 17, 20}) {
      MinimalWindow mw = minimal_window(ay.sigma, ay.gamma, seed, n, ay.beta);
      CHECK(mw.left_size() >= pl);
      CHECK(mw.right_size() >= pr);
      pl = mw.left_size();
      pr = mw.right_size();
    }
  }
}

TEST_CASE("verify_minimality rejects a shifted split") {
  const AyConstants& ay = AyConstants::get();
  SeedLetters seed = find_seed_letters(ay.sigma, ay.gamma);
  MinimalWindow mw = minimal_window(ay.sigma, ay.gamma, seed, 14, ay.beta);
  TwoSidedWindow shifted = mw.window;
  shifted.origin += 1;
  MinimalityVerdict v = verify_minimality(shifted, ay.gamma);
  CHECK_FALSE(v.ok);
  CHECK(v.worst_value < 0);
}

TEST_CASE("growth_check") {
  const AyConstants& ay = AyConstants::get();
  SeedLetters seed = find_seed_letters(ay.sigma, ay.gamma);
  MinimalWindow mw = minimal_window(ay.sigma, ay.gamma, seed, 20, ay.beta);
  SUBCASE("rho_max = 1/2 via alpha |beta|^2 = 1") {
    GrowthReport rep = growth_check(mw.window, ay.gamma, 0.4, ay.alpha, ay.beta);
    CHECK(std::abs(rep.rho_max - 0.5) < 1e-12);
  }
  SUBCASE("rho -> 0+: the ratio becomes the plain minimum, still nonnegative") {
    GrowthReport rep = growth_check(mw.window, ay.gamma, 1e-9, ay.alpha, ay.beta, 10000);
    CHECK(rep.min_ratio >= -1e-9);
  }
  SUBCASE("rho = 0.4: strictly positive minimum (frozen value)") {
    GrowthReport rep = growth_check(mw.window, ay.gamma, 0.4, ay.alpha, ay.beta);
    CHECK(rep.min_ratio > 0.1);
    CHECK(rep.min_ratio == doctest::Approx(0.1152778).epsilon(1e-4));
    CHECK(rep.argmin == -44);
  }
  SUBCASE("rho outside (0, rho_max) is rejected") {
    CHECK_THROWS_AS(growth_check(mw.window, ay.gamma, 0.6, ay.alpha, ay.beta), std::invalid_argument);
  }
}

TEST_CASE("no minimal window has an eventually periodic chain over the certified depth") {
  const AyConstants& ay = AyConstants::get();
  SeedLetters seed = find_seed_letters(ay.sigma, ay.gamma);
  MinimalWindow mw = minimal_window(ay.sigma, ay.gamma, seed, 14, ay.beta);
  auto chain = prefix_suffix_decompose(ay.sigma, mw.window, 12);
  bool periodic = false;
  for (size_t n0 = 0; n0 < chain.size() && !periodic; ++n0)
    for (size_t q = 1; n0 + 2 * q <= chain.size() && !periodic; ++q) {
      bool match = true;
      for (size_t m = n0; m + q < chain.size(); ++m)
        if (!(chain[m] == chain[m + q])) {
          match = false;
          break;
        }
      if (match && n0 + q < chain.size()) periodic = true;
    }
  CHECK_FALSE(periodic);
}

TEST_CASE("good-direction liminf certificate") {
  const AyConstants& ay = AyConstants::get();
  std::vector<double> thetas{0.850953, 3.758328};  // the Psi_1 candidates
  std::vector<double> afac{1.05, 1.2, std::abs(ay.beta)};
  auto rows = good_direction_certificate(thetas, ay.beta, 0.0, 2000, afac);
  REQUIRE(rows.size() == 6);
  for (const auto& r : rows) {
    CHECK(std::isfinite(r.min_scaled));
    CHECK(r.min_scaled > 0);
  }
}
