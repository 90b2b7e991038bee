#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "wander/ay.hpp"
#include "wander/iem.hpp"

using namespace wander;

namespace {

Iem rotation(double la, double lb) {
  Alphabet a;
  a.names = {"a", "b"};
  return {a, {la, lb}, {0, 1}, {1, 0}};
}

// golden-mean data: g = (sqrt(5)-1)/2, lengths (g, 1-g), cut g^2 = 1-g
const double kG = (std::sqrt(5.0) - 1.0) / 2.0;

}  // namespace

TEST_CASE("evaluate") {
  Iem rot = rotation(0.7, 0.3);
  CHECK(rot.evaluate(0.1) == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(rot.evaluate(0.0) == doctest::Approx(rot.delta[static_cast<size_t>(rot.pi0[0])]).epsilon(1e-14));
  CHECK_THROWS_AS(rot.evaluate(1.0), std::out_of_range);
  CHECK_THROWS_AS(rot.evaluate(-0.1), std::out_of_range);

  // A-Y at 0
  const AyConstants& ay = AyConstants::get();
  CHECK(ay.T.evaluate(0.0) == doctest::Approx((1 + ay.alpha) / 2).epsilon(1e-14));
}

TEST_CASE("bijectivity and length preservation on a grid") {
  const AyConstants& ay = AyConstants::get();
  const int n = 10000;
  std::vector<double> img;
  img.reserve(n);
  for (int i = 0; i < n; ++i) img.push_back(ay.T.evaluate((i + 0.5) / n));
  std::sort(img.begin(), img.end());
  for (int i = 0; i + 1 < n; ++i) {
    CHECK(img[static_cast<size_t>(i + 1)] > img[static_cast<size_t>(i)]);                    // distinct
    CHECK(img[static_cast<size_t>(i + 1)] - img[static_cast<size_t>(i)] < 2.0 / n);  // tiles at grid resolution
  }
  // |T(I_a)| = |I_a| exactly: translations preserve lengths by construction;
  // the image left endpoints must tile [0,1)
  std::vector<double> lefts;
  for (int a = 0; a < ay.T.size(); ++a) lefts.push_back(ay.T.left1[static_cast<size_t>(a)]);
  std::sort(lefts.begin(), lefts.end());
  double x = 0;
  for (int k = 0; k < ay.T.size(); ++k) {
    int which = -1;
    for (int a = 0; a < ay.T.size(); ++a)
      if (std::abs(ay.T.left1[static_cast<size_t>(a)] - x) < 1e-12) which = a;
    REQUIRE(which >= 0);
    x += ay.T.lengths[static_cast<size_t>(which)];
  }
  CHECK(x == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("itinerary") {
  Iem rot = rotation(0.7, 0.3);
  CodingPartition part = CodingPartition::from_iem(rot);
  SUBCASE("three forward symbols of t=0.1 spell aab (boundary at m=2 flagged)") {
    ItineraryResult r = itinerary(rot, 0.1, 0, 3, part);
    CHECK(word_str(rot.alphabet, r.window.symbols) == "aab");
    CHECK(r.boundary_hit);  // T^2(0.1) = 0.7 exactly
    CHECK(r.boundary_m == 2);
  }
  SUBCASE("t=0 starts with the first letter") {
    ItineraryResult r = itinerary(rot, 0.0, 0, 1, part);
    CHECK(r.window.symbols[0] == static_cast<uint8_t>(rot.pi0[0]));
  }
  SUBCASE("orbit through a breakpoint is flagged with the offending m") {
    ItineraryResult r = itinerary(rot, 0.4, 0, 5, part);  // T(0.4) = 0.7 exactly
    CHECK(r.boundary_hit);
    CHECK(r.boundary_m == 1);
    ItineraryResult clean = itinerary(rot, 0.111, 0, 5, part);
    CHECK_FALSE(clean.boundary_hit);
  }
}

TEST_CASE("first_return") {
  SUBCASE("cut = total: induced is T itself, R = I, single-letter words") {
    Iem rot = rotation(0.7, 0.3);
    FirstReturnResult fr = first_return(rot, 1.0, CodingPartition::from_iem(rot));
    REQUIRE(fr.coherent);
    CHECK(fr.R == IntMatrix::identity(2));
    for (Letter a = 0; a < 2; ++a) CHECK(fr.return_words->image(a) == Word{static_cast<uint8_t>(a)});
    for (double x : {0.05, 0.5, 0.9}) {
      double y = 0;
      for (const auto& p : fr.pieces)
        if (x >= p.lo && x < p.hi) y = x + p.translation;
      CHECK(y == doctest::Approx(rot.evaluate(x)).epsilon(1e-14));
    }
  }
  SUBCASE("rotation (0.7, 0.3) on [0, 0.7): the continued-fraction step") {
    Iem rot = rotation(0.7, 0.3);
    FirstReturnResult fr = first_return(rot, 0.7, CodingPartition::from_iem(rot));
    REQUIRE(fr.pieces.size() == 2);
    CHECK(fr.pieces[0].lo == doctest::Approx(0.0));
    CHECK(fr.pieces[0].hi == doctest::Approx(0.4));
    CHECK(fr.pieces[0].translation == doctest::Approx(0.3));
    CHECK(fr.pieces[0].return_time == 1);
    CHECK(fr.pieces[1].hi == doctest::Approx(0.7));
    CHECK(fr.pieces[1].translation == doctest::Approx(-0.4));
    CHECK(fr.pieces[1].return_time == 2);
  }
}

TEST_CASE("self-similarity of the golden rotation at cut g^2") {
  Iem golden = rotation(kG, 1 - kG);  // rotation by g^2 with lengths (g, g^2)
  SelfSimilarityReport rep = self_similarity_check(golden, 1 - kG);
  REQUIRE(rep.is_scaled_copy);
  CHECK(rep.max_residual < 1e-9);
  REQUIRE(rep.sigma.has_value());
  CHECK(word_str(golden.alphabet, rep.sigma->image(0)) == "aab");
  CHECK(word_str(golden.alphabet, rep.sigma->image(1)) == "ab");
  IntMatrix want(2);
  want.at(0, 0) = 2;
  want.at(0, 1) = 1;
  want.at(1, 0) = 1;
  want.at(1, 1) = 1;
  CHECK(rep.R == want);
  CHECK(rep.sigma->abelianization() == rep.R.transpose());

  // the classical fixed point sits at cut g^2, not at g
  SelfSimilarityReport at_g = self_similarity_check(golden, kG);
  CHECK_FALSE(at_g.is_scaled_copy);
}

TEST_CASE("generic lengths are not self-similar") {
  Iem rot = rotation(0.7234567, 1 - 0.7234567);
  SelfSimilarityReport rep = self_similarity_check(rot, 0.6123);
  CHECK_FALSE(rep.is_scaled_copy);
}

TEST_CASE("renormalization commutes with the coding") {
  // itinerary of cut*t under T equals sigma applied blockwise to the
  // itinerary of t under the rescaled induced map (= T itself, golden case)
  Iem golden = rotation(kG, 1 - kG);
  double cut = 1 - kG;
  CodingPartition part = CodingPartition::from_iem(golden);
  FirstReturnResult fr = first_return(golden, cut, part);
  REQUIRE(fr.coherent);
  std::mt19937_64 rng(3);
  for (int it = 0; it < 100; ++it) {
    double t = (static_cast<double>(rng() % 1000000) + 0.5) / 1000000.0;
    ItineraryResult base = itinerary(golden, t, 0, 30, part);
    if (base.boundary_hit) continue;
    ItineraryResult scaled = itinerary(golden, cut * t, 0, 30, part);
    if (scaled.boundary_hit) continue;
    // blockwise image: sigma over the base itinerary
    Word expanded = fr.return_words->apply(base.window.symbols);
    for (long m = 0; m < 30; ++m) CHECK(expanded[static_cast<size_t>(m)] == scaled.window.symbols[static_cast<size_t>(m)]);
  }
}

TEST_CASE("iem json round trip") {
  const AyConstants& ay = AyConstants::get();
  Iem back = Iem::from_json(ay.T.to_json());
  CHECK(back.size() == ay.T.size());
  for (double x : {0.01, 0.3, 0.77, 0.999}) CHECK(back.evaluate(x) == ay.T.evaluate(x));
}

TEST_CASE("first_return budget exhaustion returns partial data") {
  Iem rot = rotation(0.7, 0.3);
  FirstReturnResult fr = first_return(rot, 0.7, CodingPartition::from_iem(rot), 1);
  CHECK(fr.budget_exhausted);
  CHECK_FALSE(fr.coherent);
  bool partial = false;
  for (const auto& p : fr.pieces)
    if (p.return_time < 0) partial = true;
  CHECK(partial);
}

TEST_CASE("A-Y itineraries start with substitution images") {
  // the 20-symbol itinerary of a point near 0 begins with the sigma-image
  // of its induced itinerary (checked via the coding partition)
  const AyConstants& ay = AyConstants::get();
  ItineraryResult r = itinerary(ay.T, 0.01, 0, 20, ay.partition);
  REQUIRE_FALSE(r.boundary_hit);
  FirstReturnResult fr = first_return(ay.T, ay.alpha, ay.partition);
  // 0.01 lies in the first induced piece; its return word must prefix the itinerary
  const ReturnPiece* piece = nullptr;
  for (const auto& p : fr.pieces)
    if (0.01 >= p.lo && 0.01 < p.hi) piece = &p;
  REQUIRE(piece != nullptr);
  for (size_t i = 0; i < piece->word.size(); ++i) CHECK(r.window.symbols[i] == piece->word[i]);
}
