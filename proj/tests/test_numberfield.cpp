#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "wander/ay.hpp"
#include "wander/numberfield.hpp"

using namespace wander;

namespace {

CubicNumber cn(long a, long b, long c) { return {Rational(a), Rational(b), Rational(c)}; }

IntPoly poly(std::initializer_list<long> ascending) {
  IntPoly p;
  for (long c : ascending) p.coeff.emplace_back(c);
  return p;
}

}  // namespace

TEST_CASE("field arithmetic reduces modulo t^3+t^2+t-1") {
  CubicNumber t = CubicNumber::t();
  CHECK(t * (t * t) == cn(1, -1, -1));  // t^3 = 1 - t - t^2
  CHECK(t.inverse() == cn(1, 1, 1));    // beta^{-1} = beta^2 + beta + 1
  CHECK(t * t.inverse() == cn(1, 0, 0));
  CubicNumber x = cn(3, -7, 2);
  CHECK(x * CubicNumber(1) == x);
  CHECK(x * x.inverse() == CubicNumber(1));
  CHECK_THROWS_AS(CubicNumber(0).inverse(), std::domain_error);
  CHECK(t.pow(-3) == cn(4, 3, 2));  // beta^{-3} = 2b^2+3b+4
}

TEST_CASE("embeddings are roots and commute with arithmetic") {
  double a = CubicNumber::alpha();
  Complex b = CubicNumber::beta();
  CHECK(std::abs(((a + 1) * a + 1) * a - 1) < 1e-14);
  CHECK(std::abs(((b + 1.0) * b + 1.0) * b - 1.0) < 1e-14);
  CHECK(b.imag() > 0);
  // alpha * |beta|^2 = 1 (Vieta)
  CHECK(std::abs(a * std::norm(b) - 1.0) < 1e-12);

  std::mt19937_64 rng(7);
  auto rnd = [&] {
    auto num = [&] { return Rational(static_cast<long>(rng() % 19) - 9, 1 + static_cast<long>(rng() % 7)); };
    return CubicNumber(num(), num(), num());
  };
  for (int i = 0; i < 1000; ++i) {
    CubicNumber x = rnd(), y = rnd();
    Complex lhs = (x * y).embed_beta();
    Complex rhs = x.embed_beta() * y.embed_beta();
    CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(rhs)));
  }
}

TEST_CASE("char_poly: exact coefficients") {
  SUBCASE("identity 2x2 -> (t-1)^2") { CHECK(char_poly(IntMatrix::identity(2)) == poly({1, -2, 1})); }
  SUBCASE("fibonacci -> t^2 - t - 1") {
    IntMatrix m(2);
    m.at(0, 0) = 1;
    m.at(0, 1) = 1;
    m.at(1, 0) = 1;
    CHECK(char_poly(m) == poly({-1, -1, 1}));
  }
  SUBCASE("A-Y matrix -> (1-t^3)(t^3+t^2+t-1)(-t^3+t^2+t+1)") {
    const AyConstants& ay = AyConstants::get();
    IntPoly p = char_poly(ay.M);
    IntPoly want = poly({1, 0, 0, -1}) * poly({-1, 1, 1, 1}) * poly({1, 1, 1, -1});
    CHECK(p == want);
    double a = CubicNumber::alpha();
    Complex b = CubicNumber::beta();
    CHECK(std::abs(p.eval(Complex(a, 0))) < 1e-10);
    CHECK(std::abs(p.eval(b)) < 1e-10);
    CHECK(std::abs(p.eval(Complex(1.0 / a, 0))) < 1e-8);
    // beta is a simple root: its irreducible cubic divides exactly once
    CHECK(p.factor_multiplicity(poly({-1, 1, 1, 1})) == 1);
  }
}

TEST_CASE("eigen_pair") {
  const AyConstants& ay = AyConstants::get();
  SUBCASE("complex eigenvalue, eigenvector proportional to gamma") {
    EigenPair e = eigen_pair(ay.M, Complex(-0.77, 1.11));
    CHECK(std::abs(e.value - CubicNumber::beta()) < 1e-12);
    CHECK(e.multiplicity == 1);
    CHECK(e.residual < 1e-10);
    Complex scale = e.vector[0] / ay.gamma[0];
    for (int i = 0; i < 9; ++i)
      CHECK(std::abs(e.vector[static_cast<size_t>(i)] - scale * ay.gamma[static_cast<size_t>(i)]) < 1e-9);
  }
  SUBCASE("Perron root against a power-iteration oracle") {
    EigenPair e = eigen_pair(ay.M, Complex(1.84, 0));
    CHECK(std::abs(e.value.imag()) < 1e-12);
    CHECK(std::abs(e.value.real() - 1.0 / CubicNumber::alpha()) < 1e-12);
    std::vector<double> v(9, 1.0);
    for (int it = 0; it < 200; ++it) {
      std::vector<double> w(9, 0.0);
      for (int i = 0; i < 9; ++i)
        for (int j = 0; j < 9; ++j)
          w[static_cast<size_t>(i)] += static_cast<double>(ay.M.at(i, j)) * v[static_cast<size_t>(j)];
      double nrm = 0;
      for (double x : w) nrm = std::max(nrm, std::abs(x));
      for (auto& x : w) x /= nrm;
      v = w;
    }
    Complex scale = e.vector[0] / v[0];
    for (int i = 0; i < 9; ++i) {
      CHECK(std::abs(e.vector[static_cast<size_t>(i)] - scale * v[static_cast<size_t>(i)]) < 1e-8);
      CHECK((e.vector[static_cast<size_t>(i)] / e.vector[0]).real() > 0);
    }
  }
  SUBCASE("identity: multiplicity = dimension") {
    EigenPair e = eigen_pair(IntMatrix::identity(4), Complex(1, 0));
    CHECK(std::abs(e.value - Complex(1, 0)) < 1e-12);
    CHECK(e.multiplicity == 4);
  }
}

TEST_CASE("root_of_unity_check") {
  CHECK(root_of_unity_check(Complex(0, 1), 16).n == 2);
  CHECK(root_of_unity_check(Complex(-1.5, 0), 4).n == 1);
  RootOfUnityVerdict v = root_of_unity_check(CubicNumber::beta(), 360);
  CHECK_FALSE(v.found);  // beta/|beta| never lands on the real axis (certified up to 360)
  CHECK_THROWS_AS(root_of_unity_check(Complex(0, 0), 4), std::domain_error);
}

TEST_CASE("json round trips") {
  const AyConstants& ay = AyConstants::get();
  IntPoly p = char_poly(ay.M);
  CHECK(IntPoly::from_json(p.to_json()) == p);
  CHECK(IntMatrix::from_json(ay.M.to_json()) == ay.M);
}
