#pragma once
// Exact arithmetic in Q[t]/(t^3+t^2+t-1) plus integer-matrix eigendata.
//
// The cubic t^3+t^2+t-1 has one real root alpha ~ 0.543689 and a complex
// pair; beta is the root with positive imaginary part, |beta| > 1.
// CubicNumber is the shared exact representation; alpha and beta are two
// embeddings of the same generator t.

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "json.hpp"

namespace wander {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using Complex = std::complex<double>;
using Json = nlohmann::json;

class CubicNumber {
 public:
  CubicNumber() : c_{0, 0, 0} {}
  CubicNumber(long v) : c_{Rational(v), 0, 0} {}  // NOLINT: implicit on purpose
  CubicNumber(Rational c0, Rational c1, Rational c2) : c_{std::move(c0), std::move(c1), std::move(c2)} {}

  static CubicNumber t() { return CubicNumber(0, 1, 0); }

  const Rational& coeff(int i) const { return c_[i]; }
  bool is_zero() const { return c_[0] == 0 && c_[1] == 0 && c_[2] == 0; }
  bool operator==(const CubicNumber& o) const { return c_[0] == o.c_[0] && c_[1] == o.c_[1] && c_[2] == o.c_[2]; }
  bool operator!=(const CubicNumber& o) const { return !(*this == o); }

  CubicNumber operator+(const CubicNumber& o) const { return {c_[0] + o.c_[0], c_[1] + o.c_[1], c_[2] + o.c_[2]}; }
  CubicNumber operator-(const CubicNumber& o) const { return {c_[0] - o.c_[0], c_[1] - o.c_[1], c_[2] - o.c_[2]}; }
  CubicNumber operator-() const { return {-c_[0], -c_[1], -c_[2]}; }
  CubicNumber operator*(const CubicNumber& o) const;
  CubicNumber inverse() const;  // throws std::domain_error on zero
  CubicNumber operator/(const CubicNumber& o) const { return *this * o.inverse(); }
  CubicNumber& operator+=(const CubicNumber& o) { return *this = *this + o; }
  CubicNumber& operator-=(const CubicNumber& o) { return *this = *this - o; }
  CubicNumber& operator*=(const CubicNumber& o) { return *this = *this * o; }

  CubicNumber pow(long n) const;  // negative n allowed

  double embed_alpha() const;
  Complex embed_beta() const;

  // the two embedded roots of t^3+t^2+t-1
  static double alpha();
  static Complex beta();

  std::string str() const;

 private:
  Rational c_[3];  // c0 + c1 t + c2 t^2
};

// -------- integer polynomials (ascending coefficients) --------

struct IntPoly {
  std::vector<BigInt> coeff;  // coeff[i] * t^i

  int degree() const { return static_cast<int>(coeff.size()) - 1; }
  Complex eval(Complex z) const;
  Complex eval_derivative(Complex z) const;
  IntPoly derivative() const;
  IntPoly operator*(const IntPoly& o) const;
  bool operator==(const IntPoly& o) const;
  void trim();
  // exact division; returns false (and leaves quotient empty) if not divisible
  bool divide_exact(const IntPoly& divisor, IntPoly* quotient) const;
  // multiplicity of `factor` in *this (number of exact divisions)
  int factor_multiplicity(const IntPoly& factor) const;
  Json to_json() const;  // array of integer strings
  static IntPoly from_json(const Json& j);
};

// -------- integer matrices --------

struct IntMatrix {
  int n = 0;
  std::vector<BigInt> a;  // row major

  IntMatrix() = default;
  explicit IntMatrix(int size) : n(size), a(static_cast<size_t>(size) * size, 0) {}
  BigInt& at(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
  const BigInt& at(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }
  static IntMatrix identity(int size);
  IntMatrix transpose() const;
  IntMatrix operator*(const IntMatrix& o) const;
  bool operator==(const IntMatrix& o) const { return n == o.n && a == o.a; }
  bool nonnegative() const;
  bool strictly_positive() const;
  Json to_json() const;  // array of arrays of integer strings
  static IntMatrix from_json(const Json& j);
};

IntPoly char_poly(const IntMatrix& m);  // exact, Faddeev-LeVerrier

struct EigenPair {
  Complex value;
  std::vector<Complex> vector;
  int multiplicity = 1;
  double residual = 0.0;  // ||Mv - lambda v||_inf / ||v||_inf
};

// Newton-refines `seed` on char_poly(m), then inverse iteration for the
// eigenvector. Non-simple roots are reported through `multiplicity`.
EigenPair eigen_pair(const IntMatrix& m, Complex seed);

struct RootOfUnityVerdict {
  bool found = false;
  int n = 0;  // least n with (z/|z|)^n real, when found
};

RootOfUnityVerdict root_of_unity_check(Complex z, int n_max, double tol = 1e-9);

// Solves A x = 0 for a rank n-1 matrix over the cubic field; returns a
// kernel vector with last coordinate 1 (scaled). Throws if rank < n-1 fails.
std::vector<CubicNumber> cubic_kernel_vector(const std::vector<std::vector<CubicNumber>>& a);

}  // namespace wander
