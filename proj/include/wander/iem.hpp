#pragma once
// Interval exchange maps and affine interval exchange maps as executable
// objects, with first-return induction and self-similarity detection.
// Intervals are half-open [x, y) everywhere; breakpoint membership follows
// the left-closed convention.

#include <functional>
#include <optional>

#include "wander/substitution.hpp"

namespace wander {

struct Iem {
  Alphabet alphabet;
  std::vector<double> lengths;  // per letter
  std::vector<int> pi0, pi1;    // position -> letter

  // derived, filled by finalize()
  std::vector<double> left0, left1;  // per letter: left endpoint before/after
  std::vector<double> delta;         // per letter: T(t) = t + delta

  Iem() = default;
  Iem(Alphabet a, std::vector<double> len, std::vector<int> p0, std::vector<int> p1);
  void finalize();

  int size() const { return alphabet.size(); }
  double total() const;  // domain length (1 for normalized maps)
  Letter letter_at(double t) const;
  double evaluate(double t) const;          // throws std::out_of_range outside [0,total)
  double evaluate_inverse(double t) const;  // the inverse exchange

  Json to_json() const;  // {alphabet, lambda (decimal strings), pi0, pi1}
  static Iem from_json(const Json& j);
};

struct AffinePiece {
  double lo = 0, hi = 0;  // continuity interval [lo, hi)
  double slope = 1, intercept = 0;
  int letter = -1;  // coding letter, -1 for unlabeled (truncation boundary) pieces
};

struct AffineIem {
  std::vector<AffinePiece> pieces;  // sorted by lo, tiling [0,1)

  double evaluate(double t) const;
  Json to_json() const;
};

// A labeling of [0,1) by letters, finer than or equal to the map's own
// continuity partition is NOT assumed: it is an independent coding.
struct CodingPartition {
  Alphabet alphabet;
  std::vector<double> lefts;    // cell boundaries, size = cells+1, lefts[0]=0
  std::vector<Letter> letters;  // per cell

  Letter letter_at(double t) const;
  static CodingPartition from_iem(const Iem& T);
};

struct ItineraryResult {
  TwoSidedWindow window;
  bool boundary_hit = false;
  long boundary_m = 0;  // offending iterate when a partition boundary is hit
};

// two-sided word of length n_back + n_fwd around t (indices -n_back .. n_fwd-1)
ItineraryResult itinerary(const Iem& T, double t, long n_back, long n_fwd, const CodingPartition& partition,
                          double boundary_tol = 1e-13);

struct ReturnPiece {
  double lo = 0, hi = 0;   // piece of [0, cut)
  double translation = 0;  // induced map restricted to the piece
  long return_time = 0;
  Word word;  // coding letters visited at steps 0..r-1
};

struct FirstReturnResult {
  double cut = 0;
  std::vector<ReturnPiece> pieces;  // sorted, tiling [0, cut)
  Iem induced;                      // on [0, cut), one letter per piece
  bool coherent = false;            // pieces == cut * I_a for every letter, in order
  // set when coherent:
  IntMatrix R;
  std::optional<Substitution> return_words;
  bool budget_exhausted = false;
};

// First return of T to [0, cut). Coding of visits uses `partition`
// (pass CodingPartition::from_iem(T) for the natural coding).
FirstReturnResult first_return(const Iem& T, double cut, const CodingPartition& partition, long budget = 1'000'000);

struct SelfSimilarityReport {
  bool is_scaled_copy = false;
  double max_residual = 0;
  double failing_sample = -1;
  IntMatrix R;
  std::optional<Substitution> sigma;
};

// Verifies induced(x) == cut * T(x / cut) on a sample grid and that the
// return words define sigma with M = R^t.
SelfSimilarityReport self_similarity_check(const Iem& T, double cut, int grid = 4096, double tol = 1e-9);

}  // namespace wander
