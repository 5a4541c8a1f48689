#include <doctest.h>

#include <array>

#include "tiletopo/criteria.hpp"
#include "tiletopo/random.hpp"
#include "tiletopo/tile.hpp"

using namespace tiletopo;

namespace {

std::vector<Rational> q(std::initializer_list<Rational> v) { return v; }

}  // namespace

TEST_CASE("criterion value") {
  const std::vector<int> p{3, 3};
  CHECK(criterion_value<Rational>(p, q({2, Rational(9, 5)}), 3) == Rational(1, 3));
  CHECK(criterion_value<Rational>(p, q({0, 0}), 3) == 0);
  CHECK(criterion_value<Rational>(std::vector<int>{2}, q({2}), 2) == 1);
  // p_d < 0 flips the shift in the denominator
  CHECK(criterion_value<Rational>(std::vector<int>{3}, q({6}), -3) == Rational(1, 2));
  CHECK(criterion_value<Rational>(std::vector<int>{-3}, q({6}), 3) == Rational(1, 2));
  CHECK(criterion_value<double>(std::vector<int>{3, 3}, std::vector<double>{2.0, 1.8}, 3) == doctest::Approx(1.0 / 3));
  CHECK_THROWS_AS(criterion_value<Rational>(std::vector<int>{1}, q({1}), 2), InvalidParameterError);
  CHECK_THROWS_AS(criterion_value<Rational>(std::vector<int>{3}, q({1}), -1), InvalidParameterError);
  CHECK_THROWS_AS(criterion_value<Rational>(std::vector<int>{3, 3}, q({1}), 2), DimensionError);
}

TEST_CASE("criterion value scales with the slant") {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<int> p{static_cast<int>(rng.below(3)) + 2, -static_cast<int>(rng.below(3)) - 2};
    auto s = q({Rational(static_cast<long>(rng.below(21)) - 10, 2), Rational(static_cast<long>(rng.below(21)) - 10, 3)});
    const Rational lambda = canonical(Rational(static_cast<long>(rng.below(19)) - 9, static_cast<long>(rng.below(4)) + 1));
    const int pd = rng.below(2) ? 3 : -2;
    auto scaled = s;
    for (auto& x : scaled) x *= lambda;
    CHECK(criterion_value<Rational>(p, scaled, pd) == abs(lambda) * criterion_value<Rational>(p, s, pd));
  }
}

TEST_CASE("classification trichotomy") {
  auto c = classify(std::vector<int>{3, 3}, q({2, Rational(9, 5)}), 3);
  CHECK(c.classification == Classification::tame_ball);
  CHECK(c.exact);
  CHECK(c.exact_value == "1/3");
  CHECK(c.line() == "criterion=0.333333 classification=tame_ball");
  CHECK(classify(std::vector<int>{2}, q({2}), 2).classification == Classification::connected_not_interior_connected);
  CHECK(classify(std::vector<int>{2}, q({3}), 2).classification == Classification::disconnected);

  const auto f = classify(std::vector<int>{2}, std::vector<double>{2.0 + 1e-13}, 2);
  CHECK(f.classification == Classification::connected_not_interior_connected);
  CHECK(f.flagged);
  CHECK_FALSE(f.exact);
  CHECK(classify(std::vector<int>{2}, std::vector<double>{1.9}, 2).classification == Classification::tame_ball);

  const auto pair = SelfAffinePair::standard({3, 3, 3}, q({2, Rational(9, 5)}));
  CHECK(classify(pair).classification == Classification::tame_ball);
  CHECK(to_string(Classification::connected_not_interior_connected) == "connected_not_interior_connected");
}

TEST_CASE("planar digit offsets") {
  const std::array<Rational, 2> zero{0, 0};
  auto r = deng_lau_2d<Rational>(2, 2, Rational(0), zero);
  CHECK(r.connected);
  CHECK(r.values == std::vector<Rational>{0});

  r = deng_lau_2d<Rational>(2, 2, Rational(2), zero);
  CHECK(r.values == std::vector<Rational>{1});
  CHECK(r.connected);

  const std::array<Rational, 2> b{0, 3};
  r = deng_lau_2d<Rational>(2, 2, Rational(0), b);
  CHECK(r.values == std::vector<Rational>{0});
  CHECK(r.connected);

  // wrap-around pair (b_1, b_0) gives |-3/2 - 3/2| = 3
  r = deng_lau_2d<Rational>(2, 2, Rational(0), b, true);
  REQUIRE(r.values.size() == 2);
  CHECK(r.values[1] == 3);
  CHECK_FALSE(r.connected);

  r = deng_lau_2d<Rational>(2, 2, Rational(5, 2), zero);
  CHECK_FALSE(r.connected);

  const std::array<Rational, 3> three{0, 0, 0};
  CHECK_THROWS_AS(deng_lau_2d<Rational>(2, 2, Rational(0), three), InvalidParameterError);
  CHECK_THROWS_AS(deng_lau_2d<Rational>(2, 1, Rational(0), zero), InvalidParameterError);
}

TEST_CASE("three-dimensional ball test") {
  CHECK(ball_3d<Rational>(2, 0, 0));
  CHECK(ball_3d<Rational>(2, 1, Rational(1, 2)));
  CHECK_FALSE(ball_3d<Rational>(2, 1, 1));
  CHECK_THROWS_AS(ball_3d<Rational>(2, 1, -1), HypothesisViolationError);
  CHECK_THROWS_AS(ball_3d<double>(2, -0.5, 0.25), HypothesisViolationError);
  Rng rng(2);
  for (int trial = 0; trial < 300; ++trial) {
    const int r = (rng.below(2) ? 1 : -1) * static_cast<int>(rng.below(4) + 2);
    const Rational s(static_cast<long>(rng.below(40)), 3), t(static_cast<long>(rng.below(40)), 4);
    const bool v = ball_3d<Rational>(r, s, t);
    CHECK(v == ball_3d<Rational>(r, t, s));
    CHECK(v == ball_3d<Rational>(r, Rational(-s), Rational(-t)));
  }
}
