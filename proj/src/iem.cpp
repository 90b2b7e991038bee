#include "wander/iem.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace wander {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Iem::Iem(Alphabet a, std::vector<double> len, std::vector<int> p0, std::vector<int> p1)
    : alphabet(std::move(a)), lengths(std::move(len)), pi0(std::move(p0)), pi1(std::move(p1)) {
  finalize();
}

void Iem::finalize() {
  int n = size();
  if (static_cast<int>(lengths.size()) != n || static_cast<int>(pi0.size()) != n || static_cast<int>(pi1.size()) != n)
    throw std::invalid_argument("Iem: inconsistent sizes");
  for (double l : lengths)
    if (!(l > 0)) throw std::invalid_argument("Iem: lengths must be positive");
  left0.assign(static_cast<size_t>(n), 0);
  left1.assign(static_cast<size_t>(n), 0);
  double x = 0;
  for (int k = 0; k < n; ++k) {
    left0[static_cast<size_t>(pi0[static_cast<size_t>(k)])] = x;
    x += lengths[static_cast<size_t>(pi0[static_cast<size_t>(k)])];
  }
  x = 0;
  for (int k = 0; k < n; ++k) {
    left1[static_cast<size_t>(pi1[static_cast<size_t>(k)])] = x;
    x += lengths[static_cast<size_t>(pi1[static_cast<size_t>(k)])];
  }
  delta.assign(static_cast<size_t>(n), 0);
  for (int a = 0; a < n; ++a) delta[static_cast<size_t>(a)] = left1[static_cast<size_t>(a)] - left0[static_cast<size_t>(a)];
}

double Iem::total() const {
  double s = 0;
  for (double l : lengths) s += l;
  return s;
}

Letter Iem::letter_at(double t) const {
  if (!(t >= 0) || t >= total()) throw std::out_of_range("Iem: point outside domain");
  // positions are few; linear scan over pi0
  double x = 0;
  for (int k = 0; k < size(); ++k) {
    int a = pi0[static_cast<size_t>(k)];
    double r = x + lengths[static_cast<size_t>(a)];
    if (t < r) return a;
    x = r;
  }
  return pi0.back();
}

double Iem::evaluate(double t) const {
  Letter a = letter_at(t);
  return t + delta[static_cast<size_t>(a)];
}

double Iem::evaluate_inverse(double t) const {
  if (!(t >= 0) || t >= total()) throw std::out_of_range("Iem: point outside range");
  double x = 0;
  for (int k = 0; k < size(); ++k) {
    int a = pi1[static_cast<size_t>(k)];
    double r = x + lengths[static_cast<size_t>(a)];
    if (t < r) return t - delta[static_cast<size_t>(a)];
    x = r;
  }
  return t - delta[static_cast<size_t>(pi1.back())];
}

Json Iem::to_json() const {
  Json j;
  Json names = Json::array(), lam = Json::array(), p0 = Json::array(), p1 = Json::array();
  for (int a = 0; a < size(); ++a) {
    names.push_back(alphabet.names[static_cast<size_t>(a)]);
    lam.push_back(fmt17(lengths[static_cast<size_t>(a)]));
  }
  for (int k = 0; k < size(); ++k) {
    p0.push_back(alphabet.names[static_cast<size_t>(pi0[static_cast<size_t>(k)])]);
    p1.push_back(alphabet.names[static_cast<size_t>(pi1[static_cast<size_t>(k)])]);
  }
  j["alphabet"] = names;
  j["lambda"] = lam;
  j["pi0"] = p0;
  j["pi1"] = p1;
  return j;
}

Iem Iem::from_json(const Json& j) {
  Alphabet alpha;
  for (const auto& s : j.at("alphabet")) alpha.names.push_back(s.get<std::string>());
  std::vector<double> lengths;
  for (const auto& s : j.at("lambda")) lengths.push_back(std::stod(s.get<std::string>()));
  std::vector<int> p0, p1;
  for (const auto& s : j.at("pi0")) p0.push_back(alpha.index(s.get<std::string>()));
  for (const auto& s : j.at("pi1")) p1.push_back(alpha.index(s.get<std::string>()));
  return {alpha, lengths, p0, p1};
}

double AffineIem::evaluate(double t) const {
  for (const auto& p : pieces)
    if (t >= p.lo && t < p.hi) return p.slope * t + p.intercept;
  throw std::out_of_range("AffineIem: point outside domain");
}

Json AffineIem::to_json() const {
  Json arr = Json::array();
  for (const auto& p : pieces) {
    Json jp;
    jp["lo"] = fmt17(p.lo);
    jp["hi"] = fmt17(p.hi);
    jp["slope"] = fmt17(p.slope);
    jp["intercept"] = fmt17(p.intercept);
    jp["letter"] = p.letter;
    arr.push_back(jp);
  }
  return Json{{"pieces", arr}};
}

Letter CodingPartition::letter_at(double t) const {
  auto it = std::upper_bound(lefts.begin(), lefts.end(), t);
  long i = std::distance(lefts.begin(), it) - 1;
  if (i < 0 || i >= static_cast<long>(letters.size())) throw std::out_of_range("CodingPartition: point outside domain");
  return letters[static_cast<size_t>(i)];
}

CodingPartition CodingPartition::from_iem(const Iem& T) {
  CodingPartition p;
  p.alphabet = T.alphabet;
  p.lefts.push_back(0);
  double x = 0;
  for (int k = 0; k < T.size(); ++k) {
    int a = T.pi0[static_cast<size_t>(k)];
    x += T.lengths[static_cast<size_t>(a)];
    p.lefts.push_back(x);
    p.letters.push_back(a);
  }
  return p;
}

ItineraryResult itinerary(const Iem& T, double t, long n_back, long n_fwd, const CodingPartition& partition,
                          double boundary_tol) {
  ItineraryResult res;
  res.window.symbols.assign(static_cast<size_t>(n_back + n_fwd), 0);
  res.window.origin = n_back;
  // symbols are always filled with the left-closed convention; the first
  // exact boundary hit is flagged so callers can choose a nearby seed
  auto near_boundary = [&](double x, long m) {
    if (res.boundary_hit) return;
    for (double b : partition.lefts)
      if (std::abs(x - b) < boundary_tol && x != 0.0) {
        res.boundary_hit = true;
        res.boundary_m = m;
      }
  };
  double x = t;
  for (long m = 0; m < n_fwd; ++m) {
    near_boundary(x, m);
    res.window.symbols[static_cast<size_t>(n_back + m)] = static_cast<uint8_t>(partition.letter_at(x));
    x = T.evaluate(x);
  }
  x = t;
  for (long m = 1; m <= n_back; ++m) {
    x = T.evaluate_inverse(x);
    near_boundary(x, -m);
    res.window.symbols[static_cast<size_t>(n_back - m)] = static_cast<uint8_t>(partition.letter_at(x));
  }
  return res;
}

FirstReturnResult first_return(const Iem& T, double cut, const CodingPartition& partition, long budget) {
  if (!(cut > 0) || cut > T.total()) throw std::invalid_argument("first_return: cut outside (0, total]");
  constexpr double kEps = 1e-12;

  struct Work {
    double lo, hi, c;  // T^k = +c on [lo,hi)
    long k = 0;
    Word word;
  };
  FirstReturnResult out;
  out.cut = cut;
  std::vector<Work> queue{{0.0, cut, 0.0, 0, {}}};
  std::vector<ReturnPiece> done;
  // breakpoints of T in domain coordinates
  std::vector<double> breaks;
  {
    double x = 0;
    for (int k = 0; k < T.size(); ++k) {
      x += T.lengths[static_cast<size_t>(T.pi0[static_cast<size_t>(k)])];
      if (x < T.total() - kEps) breaks.push_back(x);
    }
  }
  while (!queue.empty()) {
    Work w = queue.back();
    queue.pop_back();
    if (w.hi - w.lo <= kEps) continue;
    if (w.k > 0) {
      // returned?
      if (w.lo + w.c >= -kEps && w.hi + w.c <= cut + kEps) {
        ReturnPiece p;
        p.lo = w.lo;
        p.hi = w.hi;
        p.translation = w.c;
        p.return_time = w.k;
        p.word = w.word;
        done.push_back(std::move(p));
        continue;
      }
      // straddles the cut?
      if (w.lo + w.c < cut - kEps && w.hi + w.c > cut + kEps) {
        double mid = cut - w.c;
        queue.push_back({w.lo, mid, w.c, w.k, w.word});
        queue.push_back({mid, w.hi, w.c, w.k, w.word});
        continue;
      }
    }
    if (w.k >= budget) {
      out.budget_exhausted = true;
      ReturnPiece p;  // partial data
      p.lo = w.lo;
      p.hi = w.hi;
      p.translation = w.c;
      p.return_time = -1;
      p.word = w.word;
      done.push_back(std::move(p));
      continue;
    }
    // split at T breakpoints (preimages under +c), then advance one step
    double l = w.lo, h = w.hi;
    bool split = false;
    for (double b : breaks) {
      double pre = b - w.c;
      if (pre > l + kEps && pre < h - kEps) {
        queue.push_back({l, pre, w.c, w.k, w.word});
        queue.push_back({pre, h, w.c, w.k, w.word});
        split = true;
        break;
      }
    }
    if (split) continue;
    double mid = 0.5 * (l + h) + w.c;
    Letter visit = partition.letter_at(mid);
    Word word = w.word;
    word.push_back(static_cast<uint8_t>(visit));
    double dl = T.delta[static_cast<size_t>(T.letter_at(mid))];
    queue.push_back({l, h, w.c + dl, w.k + 1, std::move(word)});
  }
  std::sort(done.begin(), done.end(), [](const ReturnPiece& a, const ReturnPiece& b) { return a.lo < b.lo; });
  // merge adjacent pieces with identical words (cut-straddle splits)
  std::vector<ReturnPiece> merged;
  for (auto& p : done) {
    if (!merged.empty() && merged.back().word == p.word && merged.back().return_time == p.return_time &&
        std::abs(merged.back().translation - p.translation) < kEps && std::abs(merged.back().hi - p.lo) < kEps) {
      merged.back().hi = p.hi;
    } else {
      merged.push_back(p);
    }
  }
  out.pieces = std::move(merged);

  // induced IEM: one letter per piece
  {
    int n = static_cast<int>(out.pieces.size());
    Alphabet alpha;
    std::vector<double> len;
    std::vector<int> p0(static_cast<size_t>(n)), p1(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      alpha.names.push_back("p" + std::to_string(i));
      len.push_back(out.pieces[static_cast<size_t>(i)].hi - out.pieces[static_cast<size_t>(i)].lo);
      p0[static_cast<size_t>(i)] = i;
    }
    std::vector<int> idx(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) idx[static_cast<size_t>(i)] = i;
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
      return out.pieces[static_cast<size_t>(a)].lo + out.pieces[static_cast<size_t>(a)].translation <
             out.pieces[static_cast<size_t>(b)].lo + out.pieces[static_cast<size_t>(b)].translation;
    });
    p1 = idx;
    if (n > 0 && !out.budget_exhausted) out.induced = Iem(alpha, len, p0, p1);
  }

  // coherent case: pieces match cut * I_a in order
  if (!out.budget_exhausted && static_cast<int>(out.pieces.size()) == T.size()) {
    bool ok = true;
    double x = 0;
    std::vector<Word> words(static_cast<size_t>(T.size()));
    for (int k = 0; k < T.size() && ok; ++k) {
      int a = T.pi0[static_cast<size_t>(k)];
      const auto& p = out.pieces[static_cast<size_t>(k)];
      double w = cut * T.lengths[static_cast<size_t>(a)];
      if (std::abs(p.lo - x) > 1e-9 || std::abs((p.hi - p.lo) - w) > 1e-9) ok = false;
      words[static_cast<size_t>(a)] = p.word;
      x += w;
    }
    if (ok) {
      out.coherent = true;
      out.return_words = Substitution(T.alphabet, words);
      IntMatrix R(T.size());
      for (int b = 0; b < T.size(); ++b)
        for (uint8_t aa : words[static_cast<size_t>(b)]) R.at(aa, b) += 1;
      out.R = R;
    }
  }
  return out;
}

SelfSimilarityReport self_similarity_check(const Iem& T, double cut, int grid, double tol) {
  SelfSimilarityReport rep;
  FirstReturnResult fr = first_return(T, cut, CodingPartition::from_iem(T));
  if (fr.budget_exhausted || !fr.coherent) return rep;
  double maxres = 0;
  double failing = -1;
  for (int i = 1; i < grid; ++i) {
    double x = cut * (static_cast<double>(i) / grid);
    // induced value by piece lookup
    double y = 0;
    bool found = false;
    for (const auto& p : fr.pieces)
      if (x >= p.lo && x < p.hi) {
        y = x + p.translation;
        found = true;
        break;
      }
    if (!found) continue;
    double want = cut * T.evaluate(x / cut);
    double r = std::abs(y - want);
    if (r > maxres) {
      maxres = r;
      failing = x;
    }
  }
  rep.max_residual = maxres;
  rep.failing_sample = failing;
  rep.R = fr.R;
  rep.sigma = fr.return_words;
  if (maxres <= tol) {
    // M = R^t by construction of the abelianization; assert anyway
    IntMatrix M = fr.return_words->abelianization();
    rep.is_scaled_copy = (M == fr.R.transpose());
  }
  return rep;
}

}  // namespace wander
