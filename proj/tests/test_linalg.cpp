#include <doctest.h>

#include "tiletopo/linalg.hpp"
#include "tiletopo/random.hpp"

using namespace tiletopo;

TEST_CASE("rational parsing is exact") {
  CHECK(parse_rational("-0.55") == Rational(-11, 20));
  CHECK(parse_rational("9/5") == Rational(9, 5));
  CHECK(parse_rational("1e-3") == Rational(1, 1000));
  CHECK(parse_rational("-2.5E1") == Rational(-25));
  CHECK(to_string(Rational(6, 4)) == "3/2");
  CHECK_THROWS_AS(parse_rational("1/0"), InvalidParameterError);
  CHECK_THROWS_AS(parse_rational("abc"), InvalidParameterError);
  CHECK_THROWS_AS(parse_rational(""), InvalidParameterError);
}

TEST_CASE("vectors") {
  const Vec a{1.0, -2.0, 0.5};
  const Vec b{0.0, 1.0, 1.0};
  CHECK(a + b == Vec{1.0, -1.0, 1.5});
  CHECK(norm_inf(a) == 2.0);
  CHECK(boxdot(a, b) == Vec{0.0, -2.0, 0.5});
  const auto [s, abs] = sign_abs(a);
  CHECK(s == Vec{1.0, -1.0, 1.0});
  CHECK(abs == Vec{1.0, 2.0, 0.5});
  const auto [h, y] = split_coords(a);
  CHECK(h == Vec{1.0, -2.0});
  CHECK(y == 0.5);
  CHECK_THROWS_AS(a + Vec{1.0}, DimensionError);
  CHECK_THROWS_AS(split_coords(Vec{1.0}), DimensionError);
  CHECK_THROWS_AS(Vec({1.0, std::nan("")}), DomainError);
}

TEST_CASE("triangular solve against multiply") {
  UpperTriangular<Rational> m(3);
  m.set(0, 0, 3);
  m.set(0, 2, Rational(-2));
  m.set(1, 1, 3);
  m.set(1, 2, Rational(-9, 5));
  m.set(2, 2, -3);
  CHECK_THROWS_AS(m.set(2, 0, 1), InvalidParameterError);
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    QVec x{Rational(static_cast<long>(rng.below(41)) - 20, 7), Rational(static_cast<long>(rng.below(9)), 2),
           Rational(static_cast<long>(rng.below(11)) - 5)};
    CHECK(m.solve(m.multiply(x)) == x);
  }
}

TEST_CASE("words and their base-m value") {
  CHECK(varphi_exact(Word::periodic({}, {1}, 3)) == Rational(1, 2));
  CHECK(varphi_exact(Word::finite({1, 2}, 3)) == Rational(5, 9));
  CHECK(varphi_exact(Word::periodic({0}, {1}, 2)) == Rational(1, 2));
  // 0.0111... = 0.1 in base 2
  CHECK(varphi_exact(Word::periodic({0}, {1}, 2)) == varphi_exact(Word::finite({1}, 2)));
  CHECK(varphi(Word::periodic({}, {2}, 3)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(Word::finite({3}, 3), InvalidWordError);
  CHECK_THROWS_AS(Word::periodic({0}, {}, 3), InvalidWordError);
  CHECK_THROWS_AS(Word::periodic({}, {1}, 1), InvalidWordError);
  const Word w = Word::finite({1}, 3).concat(Word::periodic({}, {0, 2}, 3));
  CHECK_FALSE(w.is_finite());
  CHECK(w.prefix() == std::vector<unsigned>{1});
  CHECK_THROWS_AS(Word::periodic({}, {1}, 3).concat(Word::finite({0}, 3)), InvalidWordError);
}

TEST_CASE("block streams are reproducible and distinct") {
  auto a = Rng::for_block(5, 3);
  auto b = Rng::for_block(5, 3);
  auto c = Rng::for_block(5, 4);
  const auto x = a.next();
  CHECK(x == b.next());
  CHECK(x != c.next());
  Rng r(1);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform();
    CHECK((u >= 0.0 && u < 1.0));
    CHECK(r.below(7) < 7);
  }
}
