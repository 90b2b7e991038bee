#include "wander/substitution.hpp"

#include <algorithm>
#include <set>

namespace wander {

int Alphabet::index(const std::string& name) const {
  for (int i = 0; i < size(); ++i)
    if (names[static_cast<size_t>(i)] == name) return i;
  throw std::out_of_range("Alphabet: unknown letter '" + name + "'");
}

Alphabet Alphabet::digits(int n) {
  Alphabet a;
  for (int i = 1; i <= n; ++i) a.names.push_back(std::to_string(i));
  return a;
}

std::string word_str(const Alphabet& alpha, const Word& w) {
  std::string s;
  for (uint8_t c : w) s += alpha.names[c];
  return s;
}

Word word_parse(const Alphabet& alpha, const std::string& s) {
  Word w;
  for (char ch : s) w.push_back(static_cast<uint8_t>(alpha.index(std::string(1, ch))));
  return w;
}

Substitution::Substitution(Alphabet alpha, std::vector<Word> images)
    : alpha_(std::move(alpha)), images_(std::move(images)) {
  if (static_cast<int>(images_.size()) != alpha_.size())
    throw std::invalid_argument("Substitution: image count mismatch");
  for (const Word& w : images_) {
    if (w.empty()) throw std::invalid_argument("Substitution: empty image");
    for (uint8_t c : w)
      if (c >= images_.size()) throw std::invalid_argument("Substitution: letter out of alphabet");
  }
}

Word Substitution::apply(const Word& w) const {
  Word out;
  size_t total = 0;
  for (uint8_t c : w) total += images_[c].size();
  out.reserve(total);
  for (uint8_t c : w) out.insert(out.end(), images_[c].begin(), images_[c].end());
  return out;
}

Word Substitution::apply_power(const Word& w, int n, size_t budget) const {
  // expand per-letter images level by level so large powers stay near-linear
  std::vector<Word> img(images_.size());
  for (size_t a = 0; a < images_.size(); ++a) img[a] = Word{static_cast<uint8_t>(a)};
  for (int k = 0; k < n; ++k) {
    std::vector<Word> next(images_.size());
    size_t total = 0;
    for (size_t a = 0; a < images_.size(); ++a) {
      size_t len = 0;
      for (uint8_t c : images_[a]) len += img[c].size();
      next[a].reserve(len);
      for (uint8_t c : images_[a]) next[a].insert(next[a].end(), img[c].begin(), img[c].end());
      total += len;
    }
    if (total > budget) throw std::length_error("apply_power: expansion exceeds budget");
    img = std::move(next);
  }
  Word out;
  size_t total = 0;
  for (uint8_t c : w) total += img[c].size();
  if (total > budget) throw std::length_error("apply_power: expansion exceeds budget");
  out.reserve(total);
  for (uint8_t c : w) out.insert(out.end(), img[c].begin(), img[c].end());
  return out;
}

IntMatrix Substitution::abelianization() const {
  IntMatrix m(size());
  for (int a = 0; a < size(); ++a)
    for (uint8_t b : images_[static_cast<size_t>(a)]) m.at(a, b) += 1;
  return m;
}

bool Substitution::is_primitive(int n_max) const {
  IntMatrix m = abelianization();
  IntMatrix p = m;
  for (int n = 1; n <= n_max; ++n) {
    if (p.strictly_positive()) return true;
    p = p * m;
  }
  return false;
}

Json Substitution::to_json() const {
  Json j = Json::object();
  for (int a = 0; a < size(); ++a)
    j[alpha_.names[static_cast<size_t>(a)]] = word_str(alpha_, images_[static_cast<size_t>(a)]);
  return j;
}

Substitution Substitution::from_json(const Json& j) {
  Alphabet alpha;
  for (auto it = j.begin(); it != j.end(); ++it) alpha.names.push_back(it.key());
  std::sort(alpha.names.begin(), alpha.names.end());
  std::vector<Word> images;
  for (const auto& name : alpha.names) images.push_back(word_parse(alpha, j[name].get<std::string>()));
  return {alpha, images};
}

Complex gamma_weight(const Word& w, std::span<const Complex> gamma) {
  Complex s = 0;
  for (uint8_t c : w) {
    if (c >= gamma.size()) throw std::out_of_range("gamma_weight: letter outside gamma");
    s += gamma[c];
  }
  return s;
}

CubicNumber gamma_weight_exact(const Word& w, std::span<const CubicNumber> gamma) {
  CubicNumber s;
  for (uint8_t c : w) {
    if (c >= gamma.size()) throw std::out_of_range("gamma_weight_exact: letter outside gamma");
    s += gamma[c];
  }
  return s;
}

std::string triple_str(const Alphabet& alpha, const PssTriple& t) {
  auto wstr = [&](const Word& w) { return w.empty() ? std::string("e") : word_str(alpha, w); };
  return "(" + wstr(t.p) + "," + alpha.names[static_cast<size_t>(t.c)] + "," + wstr(t.s) + ")";
}

std::vector<PssTriple> enumerate_decompositions(const Substitution& sigma, Letter a) {
  const Word& img = sigma.image(a);
  std::vector<PssTriple> out;
  for (size_t i = 0; i < img.size(); ++i) {
    PssTriple t;
    t.p.assign(img.begin(), img.begin() + static_cast<long>(i));
    t.c = img[i];
    t.s.assign(img.begin() + static_cast<long>(i) + 1, img.end());
    out.push_back(std::move(t));
  }
  return out;
}

void PssPath::validate(const Substitution& sigma) const {
  if (triples.empty()) throw std::invalid_argument("PssPath: empty chain");
  auto check = [&](Letter par, const PssTriple& t) {
    Word img = t.p;
    img.push_back(static_cast<uint8_t>(t.c));
    img.insert(img.end(), t.s.begin(), t.s.end());
    if (img != sigma.image(par)) throw std::invalid_argument("PssPath: chaining rule violated");
  };
  check(parent, triples[0]);
  for (size_t m = 1; m < triples.size(); ++m) check(triples[m - 1].c, triples[m]);
  if (eventually_periodic()) {
    if (preperiod + period != static_cast<int>(triples.size()))
      throw std::invalid_argument("PssPath: periodic shape must cover the stored triples");
    // seam: the last stored triple chains back into the first periodic one
    check(triples.back().c, triples[static_cast<size_t>(preperiod)]);
  }
}

std::string PssPath::str(const Alphabet& alpha) const {
  std::string s;
  for (int m = 0; m < static_cast<int>(triples.size()); ++m) {
    if (eventually_periodic() && m == preperiod) s += "[";
    s += triple_str(alpha, triples[static_cast<size_t>(m)]);
  }
  if (eventually_periodic()) s += "]*";
  return s;
}

Json PssPath::to_json(const Alphabet& alpha) const {
  Json j;
  j["parent"] = alpha.names[static_cast<size_t>(parent)];
  Json arr = Json::array();
  for (const auto& t : triples) arr.push_back(triple_str(alpha, t));
  j["triples"] = arr;
  if (eventually_periodic()) {
    j["preperiod"] = preperiod;
    j["period"] = period;
  }
  return j;
}

Letter TwoSidedWindow::at(long n) const {
  long i = n + origin;
  if (i < 0 || i >= static_cast<long>(symbols.size())) throw std::out_of_range("TwoSidedWindow: index outside window");
  return symbols[static_cast<size_t>(i)];
}

Complex birkhoff_gamma(const TwoSidedWindow& w, std::span<const Complex> gamma, long n) {
  Complex s = 0;
  if (n >= 0) {
    for (long k = 0; k < n; ++k) s += gamma[static_cast<size_t>(w.at(k))];
  } else {
    for (long k = n; k <= -1; ++k) s -= gamma[static_cast<size_t>(w.at(k))];
  }
  return s;
}

namespace {

// One desubstitution step: find all ways to view the window as sigma(parent
// window) and extract (p0, c0, s0) together with the parent view. Image
// prefixes collide (e.g. one image a prefix of another), so extension uses
// tileability with backtracking; the parent is extended only while the next
// parent letter is forced. The central triple must be unique; edge
// ambiguity only shrinks the parent.
struct Desub {
  PssTriple central;
  TwoSidedWindow parent;
};

class Tiler {
 public:
  Tiler(const Substitution& sigma, const TwoSidedWindow& w) : sigma_(sigma), w_(w), lo_(w.min_index()), hi_(w.max_index()) {}

  bool complete_match_right(Letter b, long pos) const {
    const Word& bi = sigma_.image(b);
    if (pos + static_cast<long>(bi.size()) - 1 > hi_) return false;
    for (size_t i = 0; i < bi.size(); ++i)
      if (w_.at(pos + static_cast<long>(i)) != bi[i]) return false;
    return true;
  }
  bool partial_match_right(Letter b, long pos) const {  // image sticks out past the edge
    const Word& bi = sigma_.image(b);
    if (pos + static_cast<long>(bi.size()) - 1 <= hi_) return false;
    for (size_t i = 0; i < bi.size(); ++i) {
      long idx = pos + static_cast<long>(i);
      if (idx > hi_) break;
      if (w_.at(idx) != bi[i]) return false;
    }
    return true;
  }
  // can [pos, hi] be tiled by images (edge partial allowed)?
  bool tileable_right(long pos) {
    if (pos > hi_) return true;
    auto it = memo_r_.find(pos);
    if (it != memo_r_.end()) return it->second;
    bool ok = false;
    for (Letter b = 0; b < sigma_.size() && !ok; ++b) {
      if (complete_match_right(b, pos) && tileable_right(pos + static_cast<long>(sigma_.image(b).size()))) ok = true;
      if (!ok && partial_match_right(b, pos)) ok = true;
    }
    memo_r_[pos] = ok;
    return ok;
  }
  bool complete_match_left(Letter b, long end) const {  // image ends exactly at end-1
    const Word& bi = sigma_.image(b);
    if (end - static_cast<long>(bi.size()) < lo_) return false;
    for (size_t i = 0; i < bi.size(); ++i)
      if (w_.at(end - static_cast<long>(bi.size()) + static_cast<long>(i)) != bi[i]) return false;
    return true;
  }
  bool partial_match_left(Letter b, long end) const {
    const Word& bi = sigma_.image(b);
    if (end - static_cast<long>(bi.size()) >= lo_) return false;
    for (size_t i = 0; i < bi.size(); ++i) {
      long idx = end - static_cast<long>(bi.size()) + static_cast<long>(i);
      if (idx < lo_) continue;
      if (w_.at(idx) != bi[i]) return false;
    }
    return true;
  }
  bool tileable_left(long end) {
    if (end <= lo_) return true;
    auto it = memo_l_.find(end);
    if (it != memo_l_.end()) return it->second;
    bool ok = false;
    for (Letter b = 0; b < sigma_.size() && !ok; ++b) {
      if (complete_match_left(b, end) && tileable_left(end - static_cast<long>(sigma_.image(b).size()))) ok = true;
      if (!ok && partial_match_left(b, end)) ok = true;
    }
    memo_l_[end] = ok;
    return ok;
  }

  // forced right extension from pos: parent letters while unambiguous
  Word forced_right(long pos) {
    Word out;
    while (pos <= hi_) {
      Letter unique = -1;
      bool edge = false;
      for (Letter b = 0; b < sigma_.size(); ++b) {
        if (complete_match_right(b, pos) && tileable_right(pos + static_cast<long>(sigma_.image(b).size()))) {
          if (unique >= 0) return out;  // two viable continuations: stop
          unique = b;
        }
        if (partial_match_right(b, pos)) edge = true;
      }
      if (unique < 0 || edge) return out;
      out.push_back(static_cast<uint8_t>(unique));
      pos += static_cast<long>(sigma_.image(unique).size());
    }
    return out;
  }
  Word forced_left_reversed(long end) {
    Word out;
    while (end > lo_) {
      Letter unique = -1;
      bool edge = false;
      for (Letter b = 0; b < sigma_.size(); ++b) {
        if (complete_match_left(b, end) && tileable_left(end - static_cast<long>(sigma_.image(b).size()))) {
          if (unique >= 0) return out;
          unique = b;
        }
        if (partial_match_left(b, end)) edge = true;
      }
      if (unique < 0 || edge) return out;
      out.push_back(static_cast<uint8_t>(unique));
      end -= static_cast<long>(sigma_.image(unique).size());
    }
    return out;
  }

 private:
  const Substitution& sigma_;
  const TwoSidedWindow& w_;
  long lo_, hi_;
  std::map<long, bool> memo_r_, memo_l_;
};

std::vector<Desub> desubstitute_once(const Substitution& sigma, const TwoSidedWindow& w) {
  std::vector<Desub> out;
  Tiler tiler(sigma, w);
  const long lo = w.min_index(), hi = w.max_index();
  for (Letter c1 = 0; c1 < sigma.size(); ++c1) {
    const Word& img = sigma.image(c1);
    for (size_t r = 0; r < img.size(); ++r) {
      if (img[r] != w.at(0)) continue;
      // img covers [-r, -r+|img|-1]; visible part must match and both sides
      // must remain tileable
      bool ok = true;
      long pos = -static_cast<long>(r);
      for (size_t i = 0; i < img.size(); ++i) {
        long idx = pos + static_cast<long>(i);
        if (idx < lo || idx > hi) continue;
        if (w.at(idx) != img[i]) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      long right_start = pos + static_cast<long>(img.size());
      if (!tiler.tileable_right(right_start) || !tiler.tileable_left(pos)) continue;
      Desub d;
      d.central.p.assign(img.begin(), img.begin() + static_cast<long>(r));
      d.central.c = c1;  // parent letter; (p0,c0,s0) has c0 = w.at(0)
      d.central.s.assign(img.begin() + static_cast<long>(r) + 1, img.end());
      Word right = tiler.forced_right(right_start);
      Word left_rev = tiler.forced_left_reversed(pos);
      Word psym(left_rev.rbegin(), left_rev.rend());
      long porigin = static_cast<long>(psym.size());
      psym.push_back(static_cast<uint8_t>(c1));
      psym.insert(psym.end(), right.begin(), right.end());
      d.parent.symbols = std::move(psym);
      d.parent.origin = porigin;
      out.push_back(std::move(d));
    }
  }
  return out;
}

}  // namespace

long recognizability_window_length(const Substitution& sigma, int depth, double factor) {
  // Perron root of the abelianization by power iteration on row sums
  int n = sigma.size();
  std::vector<double> v(static_cast<size_t>(n), 1.0);
  IntMatrix m = sigma.abelianization();
  double rho = 1.0;
  for (int it = 0; it < 200; ++it) {
    std::vector<double> w(static_cast<size_t>(n), 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) w[static_cast<size_t>(i)] += static_cast<double>(m.at(i, j)) * v[static_cast<size_t>(j)];
    rho = 0;
    for (double x : w) rho = std::max(rho, x);
    for (auto& x : w) x /= rho;
    v = w;
  }
  return static_cast<long>(std::ceil(factor * std::pow(rho, depth)));
}

std::vector<PssTriple> prefix_suffix_decompose(const Substitution& sigma, const TwoSidedWindow& window, int depth) {
  std::vector<PssTriple> chain;
  TwoSidedWindow cur = window;
  for (int level = 0; level <= depth; ++level) {
    if (cur.max_index() < 0 || cur.min_index() > 0)
      throw DesubstitutionError("window too short at level " + std::to_string(level), level);
    std::vector<Desub> cands = desubstitute_once(sigma, cur);
    if (cands.empty()) throw DesubstitutionError("no valid desubstitution at level " + std::to_string(level), level);
    // the central data (p0, c0=omega_0, s0) and the parent letter must be unique
    for (size_t i = 1; i < cands.size(); ++i) {
      if (!(cands[i].central == cands[0].central))
        throw DesubstitutionError("ambiguous desubstitution at level " + std::to_string(level), level);
    }
    // keep the candidate with the longest parent window
    size_t best = 0;
    for (size_t i = 1; i < cands.size(); ++i)
      if (cands[i].parent.symbols.size() > cands[best].parent.symbols.size()) best = i;
    PssTriple t;
    t.p = cands[best].central.p;
    t.c = cur.at(0);
    t.s = cands[best].central.s;
    chain.push_back(std::move(t));
    cur = cands[best].parent;
  }
  return chain;
}

}  // namespace wander
