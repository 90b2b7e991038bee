#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "wander/ay.hpp"
#include "wander/substitution.hpp"

using namespace wander;

namespace {

Substitution fibonacci() {
  Alphabet a;
  a.names = {"a", "b"};
  return {a, {{0, 1}, {0}}};
}

Word rand_word(std::mt19937_64& rng, int alphabet, int max_len) {
  Word w(1 + rng() % static_cast<uint64_t>(max_len));
  for (auto& c : w) c = static_cast<uint8_t>(rng() % static_cast<uint64_t>(alphabet));
  return w;
}

}  // namespace

TEST_CASE("abelianization") {
  const AyConstants& ay = AyConstants::get();
  IntMatrix m = ay.sigma.abelianization();
  // row for letter 1: sigma(1) = 35
  for (int b = 0; b < 9; ++b) CHECK(m.at(0, b) == ((b == 2 || b == 4) ? 1 : 0));
  CHECK(m == ay.M);

  Alphabet one;
  one.names = {"a"};
  CHECK(Substitution(one, {{0}}).abelianization() == IntMatrix::identity(1));

  IntMatrix fib = fibonacci().abelianization();
  CHECK(fib.at(0, 0) == 1);
  CHECK(fib.at(0, 1) == 1);
  CHECK(fib.at(1, 0) == 1);
  CHECK(fib.at(1, 1) == 0);
}

TEST_CASE("abelianization of powers multiplies") {
  const AyConstants& ay = AyConstants::get();
  IntMatrix m = ay.M, p = ay.M;
  for (int k = 2; k <= 4; ++k) {
    p = p * m;
    // sigma^k as an explicit substitution
    std::vector<Word> images;
    for (Letter a = 0; a < 9; ++a) images.push_back(ay.sigma.apply_power(Word{static_cast<uint8_t>(a)}, k));
    Substitution sk(ay.letters, images);
    CHECK(sk.abelianization() == p);
  }
}

TEST_CASE("is_primitive") {
  CHECK(AyConstants::get().sigma.is_primitive(20));
  CHECK(fibonacci().is_primitive(2));
  Alphabet two;
  two.names = {"a", "b"};
  Substitution diag(two, {{0}, {1}});
  CHECK_FALSE(diag.is_primitive(16));
}

TEST_CASE("gamma_weight") {
  const AyConstants& ay = AyConstants::get();
  CHECK(gamma_weight({}, ay.gamma) == Complex(0, 0));
  // gamma(sigma(1)) = gamma_3 + gamma_5 = 1 = beta * gamma_1, exactly in the field
  CubicNumber lhs = gamma_weight_exact(ay.sigma.image(0), ay.gamma_exact);
  CHECK(lhs == CubicNumber(1));
  CHECK(CubicNumber::t() * ay.gamma_exact[0] == CubicNumber(1));

  std::mt19937_64 rng(11);
  SUBCASE("gamma(sigma^2(w)) = beta^2 gamma(w)") {
    Complex b2 = CubicNumber::beta() * CubicNumber::beta();
    for (int i = 0; i < 20; ++i) {
      Word w = rand_word(rng, 9, 6);
      Complex lhs2 = gamma_weight(ay.sigma.apply(ay.sigma.apply(w)), ay.gamma);
      CHECK(std::abs(lhs2 - b2 * gamma_weight(w, ay.gamma)) <= 1e-10);
    }
  }
  SUBCASE("additivity under concatenation") {
    for (int i = 0; i < 100; ++i) {
      Word u = rand_word(rng, 9, 12), v = rand_word(rng, 9, 12);
      Word uv = u;
      uv.insert(uv.end(), v.begin(), v.end());
      CHECK(std::abs(gamma_weight(uv, ay.gamma) - gamma_weight(u, ay.gamma) - gamma_weight(v, ay.gamma)) < 1e-13);
    }
  }
  SUBCASE("unknown letter") {
    CHECK_THROWS_AS(gamma_weight(Word{9}, ay.gamma), std::out_of_range);
  }
}

TEST_CASE("birkhoff sums over a window") {
  Alphabet two;
  two.names = {"a", "b"};
  // window ab.ba with gamma = (1, -i)
  TwoSidedWindow w;
  w.symbols = {0, 1, 1, 0};
  w.origin = 2;
  std::vector<Complex> g{{1, 0}, {0, -1}};
  CHECK(birkhoff_gamma(w, g, 0) == Complex(0, 0));
  CHECK(birkhoff_gamma(w, g, 2) == Complex(1, -1));   // gamma_b + gamma_a
  CHECK(birkhoff_gamma(w, g, -1) == Complex(0, 1));   // -gamma_b
  CHECK_THROWS_AS(birkhoff_gamma(w, g, 3), std::out_of_range);
}

TEST_CASE("enumerate_decompositions") {
  const AyConstants& ay = AyConstants::get();
  auto d1 = enumerate_decompositions(ay.sigma, 0);  // sigma(1) = 35
  REQUIRE(d1.size() == 2);
  CHECK(d1[0].p.empty());
  CHECK(d1[0].c == 2);
  CHECK(d1[0].s == Word{4});
  CHECK(d1[1].p == Word{2});
  CHECK(d1[1].c == 4);
  CHECK(d1[1].s.empty());

  auto d8 = enumerate_decompositions(ay.sigma, 7);  // sigma(8) = 2
  REQUIRE(d8.size() == 1);
  CHECK(d8[0].p.empty());
  CHECK(d8[0].c == 1);
  CHECK(d8[0].s.empty());

  Alphabet three;
  three.names = {"a", "b", "c"};
  Substitution abc(three, {{0, 1, 2}, {0}, {0}});
  CHECK(enumerate_decompositions(abc, 0).size() == 3);
}

TEST_CASE("prefix_suffix_decompose") {
  const AyConstants& ay = AyConstants::get();
  SUBCASE("leftmost position of sigma^k(a): all prefixes empty") {
    Word img = ay.sigma.apply_power(Word{0}, 8);
    TwoSidedWindow w;
    w.symbols = img;
    w.origin = 0;
    auto chain = prefix_suffix_decompose(ay.sigma, w, 4);
    for (const auto& t : chain) CHECK(t.p.empty());
  }
  SUBCASE("position 1 of the fixed-point direction of sigma^3(3)") {
    // sigma^3(3) = 3529353 is a prefix of sigma^6(3); use the longer window
    Word img3 = ay.sigma.apply_power(Word{2}, 3);
    Word img = ay.sigma.apply_power(Word{2}, 6);
    for (size_t i = 0; i < img3.size(); ++i) REQUIRE(img[i] == img3[i]);
    TwoSidedWindow w;
    w.symbols = img;
    w.origin = 1;
    auto chain = prefix_suffix_decompose(ay.sigma, w, 2);
    CHECK(chain[0].p == Word{img[0]});  // p0 = first letter "3"
    CHECK(chain[0].c == img[1]);        // c0 = second letter "5"
  }
  SUBCASE("central-part identity reconstructs the window") {
    Word img = ay.sigma.apply_power(Word{3}, 6);
    TwoSidedWindow w;
    w.symbols = img;
    w.origin = static_cast<long>(img.size()) / 2;
    auto chain = prefix_suffix_decompose(ay.sigma, w, 3);
    // ... sigma^3(p3) sigma^2(p2) sigma(p1) p0 . c0 s0 sigma(s1) sigma^2(s2) sigma^3(s3) ...
    Word left, right;
    for (int m = 3; m >= 1; --m) {
      Word part = ay.sigma.apply_power(chain[static_cast<size_t>(m)].p, m);
      left.insert(left.end(), part.begin(), part.end());
    }
    left.insert(left.end(), chain[0].p.begin(), chain[0].p.end());
    right.push_back(static_cast<uint8_t>(chain[0].c));
    right.insert(right.end(), chain[0].s.begin(), chain[0].s.end());
    for (int m = 1; m <= 3; ++m) {
      Word part = ay.sigma.apply_power(chain[static_cast<size_t>(m)].s, m);
      right.insert(right.end(), part.begin(), part.end());
    }
    for (size_t i = 0; i < left.size(); ++i) {
      long idx = -static_cast<long>(left.size() - i);
      if (idx >= w.min_index()) CHECK(w.at(idx) == left[i]);
    }
    for (size_t i = 0; i < right.size(); ++i) {
      long idx = static_cast<long>(i);
      if (idx <= w.max_index()) CHECK(w.at(idx) == right[i]);
    }
  }
  SUBCASE("ambiguous desubstitution is an error") {
    Alphabet one;
    one.names = {"a"};
    Substitution doubling(one, {{0, 0}});
    TwoSidedWindow w;
    w.symbols = Word(16, 0);
    w.origin = 7;
    CHECK_THROWS_AS(prefix_suffix_decompose(doubling, w, 2), DesubstitutionError);
  }
}

TEST_CASE("PssPath validation and periodic shapes") {
  const AyConstants& ay = AyConstants::get();
  PssPath p;
  p.parent = 0;
  p.triples.push_back({{2}, 4, {}});  // (3,5,e)
  CHECK_NOTHROW(p.validate(ay.sigma));
  p.triples.push_back({{2}, 4, {}});  // sigma(5) != 35: broken chain
  CHECK_THROWS_AS(p.validate(ay.sigma), std::invalid_argument);

  // eventually periodic with a seam: (e,3,5)(e,4,6)(1,7,e)[(e,2,9)(e,4,5)(1,7,e)]*
  PssPath q;
  q.parent = 0;
  q.triples = {{{}, 2, {4}}, {{}, 3, {5}}, {{0}, 6, {}}, {{}, 1, {8}}, {{}, 3, {4}}, {{0}, 6, {}}};
  q.preperiod = 3;
  q.period = 3;
  CHECK_NOTHROW(q.validate(ay.sigma));
  q.period = 2;
  CHECK_THROWS_AS(q.validate(ay.sigma), std::invalid_argument);
}

TEST_CASE("recognizability window length grows like the Perron root") {
  const AyConstants& ay = AyConstants::get();
  long l8 = recognizability_window_length(ay.sigma, 8);
  long l9 = recognizability_window_length(ay.sigma, 9);
  CHECK(l8 >= 4);
  double ratio = static_cast<double>(l9) / static_cast<double>(l8);
  CHECK(ratio == doctest::Approx(1.0 / ay.alpha).epsilon(0.02));
}

TEST_CASE("substitution json round trip") {
  const AyConstants& ay = AyConstants::get();
  Substitution back = Substitution::from_json(ay.sigma.to_json());
  for (Letter a = 0; a < 9; ++a) CHECK(back.image(a) == ay.sigma.image(a));
}
