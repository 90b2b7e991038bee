#include "wander/numberfield.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace wander {

namespace {

// reduction of t^3 and t^4 modulo t^3+t^2+t-1:  t^3 = 1 - t - t^2
// t^4 = t - t^2 - t^3 = -1 + 2t
void reduce(Rational c[5]) {
  // degree 4 down
  c[1] += 2 * c[4];
  c[0] -= c[4];
  c[4] = 0;
  c[0] += c[3];
  c[1] -= c[3];
  c[2] -= c[3];
  c[3] = 0;
}

double newton_real_root() {
  double x = 0.5;
  for (int i = 0; i < 64; ++i) {
    double p = ((x + 1) * x + 1) * x - 1;
    double dp = (3 * x + 2) * x + 1;
    x -= p / dp;
  }
  return x;
}

Complex newton_complex_root() {
  Complex z(-0.77, 1.12);
  for (int i = 0; i < 64; ++i) {
    Complex p = ((z + 1.0) * z + 1.0) * z - 1.0;
    Complex dp = (3.0 * z + 2.0) * z + 1.0;
    z -= p / dp;
  }
  if (z.imag() < 0) z = std::conj(z);
  return z;
}

double to_double(const Rational& r) {
  return static_cast<double>(r);
}

}  // namespace

CubicNumber CubicNumber::operator*(const CubicNumber& o) const {
  Rational c[5] = {0, 0, 0, 0, 0};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) c[i + j] += c_[i] * o.c_[j];
  reduce(c);
  return {c[0], c[1], c[2]};
}

CubicNumber CubicNumber::inverse() const {
  if (is_zero()) throw std::domain_error("CubicNumber: inversion of zero");
  // extended Euclid in Q[t] between m(t)=t^3+t^2+t-1 and this (degree <= 2).
  // Work with rational coefficient vectors.
  using Poly = std::vector<Rational>;
  auto deg = [](const Poly& p) {
    for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i)
      if (p[static_cast<size_t>(i)] != 0) return i;
    return -1;
  };
  Poly r0 = {-1, 1, 1, 1};                // m(t), ascending
  Poly r1 = {c_[0], c_[1], c_[2], 0};
  Poly s0 = {0}, s1 = {1};                // Bezout coefficients for the second argument
  while (deg(r1) > 0) {
    // divide r0 by r1
    Poly q(4, Rational(0));
    Poly rem = r0;
    int d1 = deg(r1);
    for (int d0 = deg(rem); d0 >= d1; d0 = deg(rem)) {
      Rational f = rem[static_cast<size_t>(d0)] / r1[static_cast<size_t>(d1)];
      q[static_cast<size_t>(d0 - d1)] += f;
      for (int i = 0; i <= d1; ++i) rem[static_cast<size_t>(i + d0 - d1)] -= f * r1[static_cast<size_t>(i)];
    }
    // (r0, r1) <- (r1, rem); (s0, s1) <- (s1, s0 - q s1)
    Poly s2(6, Rational(0));
    for (size_t i = 0; i < s0.size(); ++i) s2[i] += s0[i];
    for (size_t i = 0; i < q.size(); ++i)
      for (size_t j = 0; j < s1.size(); ++j)
        if (q[i] != 0 && s1[j] != 0) s2[i + j] -= q[i] * s1[j];
    r0 = r1;
    r1 = rem;
    s0 = s1;
    s1 = s2;
  }
  if (deg(r1) != 0) throw std::domain_error("CubicNumber: not invertible (unexpected)");
  Rational unit = r1[0];
  Rational c[5] = {0, 0, 0, 0, 0};
  for (size_t i = 0; i < s1.size() && i < 5; ++i) c[i] = s1[i] / unit;
  reduce(c);
  return {c[0], c[1], c[2]};
}

CubicNumber CubicNumber::pow(long n) const {
  CubicNumber base = n < 0 ? inverse() : *this;
  unsigned long e = static_cast<unsigned long>(n < 0 ? -n : n);
  CubicNumber acc(1);
  while (e) {
    if (e & 1) acc *= base;
    base *= base;
    e >>= 1;
  }
  return acc;
}

double CubicNumber::alpha() {
  static const double a = newton_real_root();
  return a;
}

Complex CubicNumber::beta() {
  static const Complex b = newton_complex_root();
  return b;
}

double CubicNumber::embed_alpha() const {
  double a = alpha();
  return to_double(c_[0]) + to_double(c_[1]) * a + to_double(c_[2]) * a * a;
}

Complex CubicNumber::embed_beta() const {
  Complex b = beta();
  return to_double(c_[0]) + to_double(c_[1]) * b + to_double(c_[2]) * b * b;
}

std::string CubicNumber::str() const {
  std::ostringstream os;
  os << c_[0] << " + " << c_[1] << "*t + " << c_[2] << "*t^2";
  return os.str();
}

// -------- IntPoly --------

Complex IntPoly::eval(Complex z) const {
  Complex r = 0;
  for (int i = degree(); i >= 0; --i) r = r * z + static_cast<double>(coeff[static_cast<size_t>(i)]);
  return r;
}

Complex IntPoly::eval_derivative(Complex z) const {
  Complex r = 0;
  for (int i = degree(); i >= 1; --i)
    r = r * z + static_cast<double>(i) * static_cast<double>(coeff[static_cast<size_t>(i)]);
  return r;
}

IntPoly IntPoly::derivative() const {
  IntPoly d;
  for (size_t i = 1; i < coeff.size(); ++i) d.coeff.push_back(BigInt(i) * coeff[i]);
  return d;
}

IntPoly IntPoly::operator*(const IntPoly& o) const {
  IntPoly r;
  if (coeff.empty() || o.coeff.empty()) return r;
  r.coeff.assign(coeff.size() + o.coeff.size() - 1, 0);
  for (size_t i = 0; i < coeff.size(); ++i)
    for (size_t j = 0; j < o.coeff.size(); ++j) r.coeff[i + j] += coeff[i] * o.coeff[j];
  return r;
}

void IntPoly::trim() {
  while (!coeff.empty() && coeff.back() == 0) coeff.pop_back();
}

bool IntPoly::operator==(const IntPoly& o) const {
  IntPoly x = *this, y = o;
  x.trim();
  y.trim();
  return x.coeff == y.coeff;
}

bool IntPoly::divide_exact(const IntPoly& divisor, IntPoly* quotient) const {
  IntPoly rem = *this, div = divisor;
  rem.trim();
  div.trim();
  if (div.coeff.empty()) return false;
  IntPoly q;
  if (rem.degree() < div.degree()) return false;
  q.coeff.assign(static_cast<size_t>(rem.degree() - div.degree()) + 1, 0);
  for (int d = rem.degree(); d >= div.degree(); --d) {
    BigInt lead = rem.coeff[static_cast<size_t>(d)];
    if (lead == 0) continue;
    if (lead % div.coeff.back() != 0) return false;
    BigInt f = lead / div.coeff.back();
    int shift = d - div.degree();
    q.coeff[static_cast<size_t>(shift)] = f;
    for (int i = 0; i <= div.degree(); ++i)
      rem.coeff[static_cast<size_t>(i + shift)] -= f * div.coeff[static_cast<size_t>(i)];
  }
  rem.trim();
  if (!rem.coeff.empty()) return false;
  if (quotient) *quotient = q;
  return true;
}

int IntPoly::factor_multiplicity(const IntPoly& factor) const {
  int k = 0;
  IntPoly cur = *this, q;
  while (cur.divide_exact(factor, &q)) {
    ++k;
    cur = q;
    if (cur.degree() < factor.degree()) break;
  }
  return k;
}

Json IntPoly::to_json() const {
  Json arr = Json::array();
  for (const auto& c : coeff) arr.push_back(c.str());
  return arr;
}

IntPoly IntPoly::from_json(const Json& j) {
  IntPoly p;
  for (const auto& s : j) p.coeff.emplace_back(s.get<std::string>());
  return p;
}

// -------- IntMatrix --------

IntMatrix IntMatrix::identity(int size) {
  IntMatrix m(size);
  for (int i = 0; i < size; ++i) m.at(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m.at(j, i) = at(i, j);
  return m;
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
  IntMatrix m(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const BigInt& v = at(i, k);
      if (v == 0) continue;
      for (int j = 0; j < n; ++j) m.at(i, j) += v * o.at(k, j);
    }
  return m;
}

bool IntMatrix::nonnegative() const {
  return std::all_of(a.begin(), a.end(), [](const BigInt& v) { return v >= 0; });
}

bool IntMatrix::strictly_positive() const {
  return std::all_of(a.begin(), a.end(), [](const BigInt& v) { return v > 0; });
}

Json IntMatrix::to_json() const {
  Json rows = Json::array();
  for (int i = 0; i < n; ++i) {
    Json row = Json::array();
    for (int j = 0; j < n; ++j) row.push_back(at(i, j).str());
    rows.push_back(row);
  }
  return rows;
}

IntMatrix IntMatrix::from_json(const Json& j) {
  IntMatrix m(static_cast<int>(j.size()));
  for (int i = 0; i < m.n; ++i)
    for (int jj = 0; jj < m.n; ++jj) m.at(i, jj) = BigInt(j[i][jj].get<std::string>());
  return m;
}

IntPoly char_poly(const IntMatrix& m) {
  // Faddeev-LeVerrier: exact over the integers (each division by k is exact).
  int n = m.n;
  std::vector<BigInt> c(static_cast<size_t>(n) + 1);
  c[static_cast<size_t>(n)] = 1;
  IntMatrix mk = m;  // M * B_0 with B_0 = I
  for (int k = 1; k <= n; ++k) {
    BigInt tr = 0;
    for (int i = 0; i < n; ++i) tr += mk.at(i, i);
    if (tr % k != 0) throw std::logic_error("char_poly: non-exact trace division");
    BigInt ck = -tr / k;
    c[static_cast<size_t>(n - k)] = ck;
    if (k == n) break;
    IntMatrix bk = mk;
    for (int i = 0; i < n; ++i) bk.at(i, i) += ck;
    mk = m * bk;
  }
  IntPoly p;
  p.coeff = std::move(c);
  return p;
}

EigenPair eigen_pair(const IntMatrix& m, Complex seed) {
  IntPoly p = char_poly(m);
  Complex lam = seed;
  for (int it = 0; it < 200; ++it) {
    Complex f = p.eval(lam);
    Complex df = p.eval_derivative(lam);
    if (std::abs(df) < 1e-300) break;
    Complex step = f / df;
    lam -= step;
    if (std::abs(step) < 1e-16 * (1.0 + std::abs(lam))) break;
  }
  // multiplicity: count leading vanishing derivatives at lam
  int mult = 0;
  {
    IntPoly d = p;
    double scale = 0;
    for (const auto& c : p.coeff) scale = std::max(scale, std::abs(static_cast<double>(c)));
    double tol = 1e-6 * std::max(1.0, scale);
    while (d.degree() >= 0 && std::abs(d.eval(lam)) < tol) {
      ++mult;
      d = d.derivative();
    }
    if (mult == 0) mult = 1;
  }

  int n = m.n;
  // inverse-iteration style nullspace of (M - lam I) via complex Gaussian elimination
  std::vector<std::vector<Complex>> a(static_cast<size_t>(n), std::vector<Complex>(static_cast<size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      a[static_cast<size_t>(i)][static_cast<size_t>(j)] = static_cast<double>(m.at(i, j));
      if (i == j) a[static_cast<size_t>(i)][static_cast<size_t>(j)] -= lam;
    }
  std::vector<int> piv_col;
  int row = 0;
  std::vector<int> col_of_row(static_cast<size_t>(n), -1);
  std::vector<bool> is_pivot(static_cast<size_t>(n), false);
  for (int col = 0; col < n && row < n; ++col) {
    int best = -1;
    double bv = 1e-9;
    for (int r = row; r < n; ++r) {
      double v = std::abs(a[static_cast<size_t>(r)][static_cast<size_t>(col)]);
      if (v > bv) {
        bv = v;
        best = r;
      }
    }
    if (best < 0) continue;
    std::swap(a[static_cast<size_t>(best)], a[static_cast<size_t>(row)]);
    Complex pv = a[static_cast<size_t>(row)][static_cast<size_t>(col)];
    for (int r = 0; r < n; ++r) {
      if (r == row) continue;
      Complex f = a[static_cast<size_t>(r)][static_cast<size_t>(col)] / pv;
      if (std::abs(f) == 0) continue;
      for (int j = col; j < n; ++j)
        a[static_cast<size_t>(r)][static_cast<size_t>(j)] -= f * a[static_cast<size_t>(row)][static_cast<size_t>(j)];
    }
    col_of_row[static_cast<size_t>(row)] = col;
    is_pivot[static_cast<size_t>(col)] = true;
    piv_col.push_back(col);
    ++row;
  }
  // free column -> kernel vector
  int free_col = -1;
  for (int col = n - 1; col >= 0; --col)
    if (!is_pivot[static_cast<size_t>(col)]) {
      free_col = col;
      break;
    }
  std::vector<Complex> v(static_cast<size_t>(n), 0.0);
  if (free_col < 0) {
    v[static_cast<size_t>(n - 1)] = 1.0;  // degenerate; residual will expose it
  } else {
    v[static_cast<size_t>(free_col)] = 1.0;
    for (int r = 0; r < static_cast<int>(piv_col.size()); ++r) {
      int col = col_of_row[static_cast<size_t>(r)];
      v[static_cast<size_t>(col)] =
          -a[static_cast<size_t>(r)][static_cast<size_t>(free_col)] / a[static_cast<size_t>(r)][static_cast<size_t>(col)];
    }
  }
  double vn = 0;
  for (auto& x : v) vn = std::max(vn, std::abs(x));
  double res = 0;
  for (int i = 0; i < n; ++i) {
    Complex s = 0;
    for (int j = 0; j < n; ++j) s += static_cast<double>(m.at(i, j)) * v[static_cast<size_t>(j)];
    res = std::max(res, std::abs(s - lam * v[static_cast<size_t>(i)]));
  }
  EigenPair out;
  out.value = lam;
  out.vector = std::move(v);
  out.multiplicity = mult;
  out.residual = vn > 0 ? res / vn : res;
  return out;
}

RootOfUnityVerdict root_of_unity_check(Complex z, int n_max, double tol) {
  if (std::abs(z) <= 0) throw std::domain_error("root_of_unity_check: zero input");
  Complex u = z / std::abs(z);
  Complex p = 1.0;
  for (int n = 1; n <= n_max; ++n) {
    p *= u;
    p /= std::abs(p);  // keep on the unit circle
    if (std::abs(p.imag()) <= tol) return {true, n};
  }
  return {false, 0};
}

std::vector<CubicNumber> cubic_kernel_vector(const std::vector<std::vector<CubicNumber>>& a0) {
  auto a = a0;
  int n = static_cast<int>(a.size());
  int row = 0;
  std::vector<int> col_of_row(static_cast<size_t>(n), -1);
  std::vector<bool> pivot(static_cast<size_t>(n), false);
  for (int col = 0; col < n && row < n; ++col) {
    int best = -1;
    for (int r = row; r < n; ++r)
      if (!a[static_cast<size_t>(r)][static_cast<size_t>(col)].is_zero()) {
        best = r;
        break;
      }
    if (best < 0) continue;
    std::swap(a[static_cast<size_t>(best)], a[static_cast<size_t>(row)]);
    CubicNumber pv = a[static_cast<size_t>(row)][static_cast<size_t>(col)];
    for (int r = 0; r < n; ++r) {
      if (r == row) continue;
      if (a[static_cast<size_t>(r)][static_cast<size_t>(col)].is_zero()) continue;
      CubicNumber f = a[static_cast<size_t>(r)][static_cast<size_t>(col)] / pv;
      for (int j = col; j < n; ++j)
        a[static_cast<size_t>(r)][static_cast<size_t>(j)] -= f * a[static_cast<size_t>(row)][static_cast<size_t>(j)];
    }
    col_of_row[static_cast<size_t>(row)] = col;
    pivot[static_cast<size_t>(col)] = true;
    ++row;
  }
  int free_col = -1;
  for (int col = n - 1; col >= 0; --col)
    if (!pivot[static_cast<size_t>(col)]) {
      free_col = col;
      break;
    }
  if (free_col < 0) throw std::domain_error("cubic_kernel_vector: matrix has full rank");
  std::vector<CubicNumber> v(static_cast<size_t>(n));
  v[static_cast<size_t>(free_col)] = CubicNumber(1);
  for (int r = 0; r < n; ++r) {
    int col = col_of_row[static_cast<size_t>(r)];
    if (col < 0) continue;
    v[static_cast<size_t>(col)] =
        CubicNumber(0) - a[static_cast<size_t>(r)][static_cast<size_t>(free_col)] / a[static_cast<size_t>(r)][static_cast<size_t>(col)];
  }
  return v;
}

}  // namespace wander
