#pragma once
// Words, substitutions, abelianization, prefix-suffix machinery and
// gamma-weighted Birkhoff sums over the subshift.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wander/numberfield.hpp"

namespace wander {

using Letter = int;                 // index into an Alphabet
using Word = std::vector<uint8_t>;  // letters as alphabet indices

struct Alphabet {
  std::vector<std::string> names;

  int size() const { return static_cast<int>(names.size()); }
  int index(const std::string& name) const;
  static Alphabet digits(int n);  // "1", "2", ..., "n"
};

std::string word_str(const Alphabet& alpha, const Word& w);
Word word_parse(const Alphabet& alpha, const std::string& s);  // names must be single chars

class Substitution {
 public:
  Substitution() = default;
  Substitution(Alphabet alpha, std::vector<Word> images);

  const Alphabet& alphabet() const { return alpha_; }
  int size() const { return alpha_.size(); }
  const Word& image(Letter a) const { return images_[static_cast<size_t>(a)]; }
  Word apply(const Word& w) const;
  Word apply_power(const Word& w, int n, size_t budget = 200'000'000) const;

  IntMatrix abelianization() const;
  bool is_primitive(int n_max) const;

  Json to_json() const;
  static Substitution from_json(const Json& j);

 private:
  Alphabet alpha_;
  std::vector<Word> images_;
};

// gamma(w) = sum of coordinates; gamma(eps) = 0
Complex gamma_weight(const Word& w, std::span<const Complex> gamma);
CubicNumber gamma_weight_exact(const Word& w, std::span<const CubicNumber> gamma);

// sigma(parent) = p c s
struct PssTriple {
  Word p;
  Letter c = 0;
  Word s;

  bool operator==(const PssTriple& o) const { return p == o.p && c == o.c && s == o.s; }
};

std::string triple_str(const Alphabet& alpha, const PssTriple& t);

// all |sigma(a)| splittings, ordered by |p|
std::vector<PssTriple> enumerate_decompositions(const Substitution& sigma, Letter a);

// A chain (x_m)_{m>=1} in S_a: sigma(a) = p_1 c_1 s_1, sigma(c_m) = p_{m+1} c_{m+1} s_{m+1}.
// Finite chains are implicitly continued with empty prefixes (which does not
// change the associated value). Eventually periodic chains repeat
// triples[preperiod .. preperiod+period) forever.
struct PssPath {
  Letter parent = 0;
  std::vector<PssTriple> triples;
  int preperiod = -1;  // <0: finite shape
  int period = 0;

  bool eventually_periodic() const { return preperiod >= 0 && period > 0; }
  // checks the chaining rule (incl. across the period seam)
  void validate(const Substitution& sigma) const;  // throws std::invalid_argument
  std::string str(const Alphabet& alpha) const;
  Json to_json(const Alphabet& alpha) const;
};

// two-sided finite view omega_{-m..m'-1} with symbols[origin] = omega_0
struct TwoSidedWindow {
  Word symbols;
  long origin = 0;

  long min_index() const { return -origin; }
  long max_index() const { return static_cast<long>(symbols.size()) - origin - 1; }
  Letter at(long n) const;
};

// gamma_0 = 0, gamma_n = gamma(w_0..w_{n-1}) for n>=1, gamma_n = -gamma(w_n..w_{-1}) for n<=-1
Complex birkhoff_gamma(const TwoSidedWindow& w, std::span<const Complex> gamma, long n);

struct DesubstitutionError : std::runtime_error {
  int level;
  explicit DesubstitutionError(const std::string& what, int lvl) : std::runtime_error(what), level(lvl) {}
};

// Reconstructs the chain (p_m, c_m, s_m)_{0<=m<=depth} of the window by
// exhaustive matching of sigma-images against the window. Ambiguity that
// reaches the central triple is an error naming the failing level.
std::vector<PssTriple> prefix_suffix_decompose(const Substitution& sigma, const TwoSidedWindow& window, int depth);

// Recognizability is guaranteed only for long enough windows; the constant
// is not quantified, so the required window length is exposed as a
// configurable estimate: factor * (Perron of M)^depth symbols per side.
long recognizability_window_length(const Substitution& sigma, int depth, double factor = 4.0);

}  // namespace wander
