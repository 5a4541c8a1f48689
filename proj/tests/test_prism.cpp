#include <doctest.h>

#include <cmath>

#include "tiletopo/prism.hpp"
#include "tiletopo/random.hpp"
#include "tiletopo/tile.hpp"

using namespace tiletopo;

namespace {

SelfAffinePair figure_pair() {
  return SelfAffinePair::layered({3, 3, 3}, {2, Rational(9, 5)},
                                 {QVec{0, 0}, QVec{Rational(-11, 20), Rational(-9, 20)},
                                  QVec{Rational(-5, 4), Rational(-21, 20)}});
}

PathProfile<Rational> random_profile(Rng& rng, std::size_t h) {
  const int r = static_cast<int>(rng.below(4)) + 2;
  const Rational b(static_cast<long>(rng.below(5)) + 1, static_cast<long>(rng.below(3)) + 1);
  const Rational eps = b / (2 * r) * Rational(static_cast<long>(rng.below(9)) + 1, 10);
  std::vector<QVec> u;
  for (int k = 1; k < r; ++k) {
    std::vector<Rational> c(h);
    for (auto& x : c) x = Rational(static_cast<long>(rng.below(199)) - 99, 100);
    u.emplace_back(std::move(c));
  }
  return PathProfile<Rational>(r, b, eps, std::move(u));
}

Vec random_in(Rng& rng, const Prism& prism, double spread) {
  std::vector<double> w(prism.dimension() - 1);
  for (auto& c : w) c = rng.uniform(-spread, spread);
  return prism.point(Vec(w), rng.uniform(-0.2, 1.2));
}

}  // namespace

TEST_CASE("profile validation") {
  CHECK_THROWS_AS(PathProfile<double>(1, 1.0, 0.1, {}), InvalidParameterError);
  CHECK_THROWS_AS(PathProfile<double>(2, 1.0, 0.25, {Vec{0.1}}), InvalidParameterError);
  CHECK_THROWS_AS(PathProfile<double>(2, 1.0, 0.0, {Vec{0.1}}), InvalidParameterError);
  CHECK_THROWS_AS(PathProfile<double>(2, -1.0, 0.1, {Vec{0.1}}), InvalidParameterError);
  CHECK_THROWS_AS(PathProfile<double>(2, 1.0, 0.1, {Vec{1.0}}), InvalidParameterError);
  CHECK_THROWS_AS(PathProfile<double>(3, 1.0, 0.1, {Vec{0.1}}), InvalidParameterError);
  CHECK_THROWS_AS(PathProfile<double>(3, 1.0, 0.1, {Vec{0.1}, Vec{0.1, 0.2}}), DimensionError);
  const PathProfile<Rational> p(3, Rational(1), Rational(1, 12), {QVec{Rational(1, 5)}, QVec{Rational(-7, 10)}});
  CHECK(p.level(0) == 0);
  CHECK(p.level(3) == 1);
  CHECK(p.v(2) == QVec{Rational(-1, 2)});
  CHECK(p.flatten_halfwidth() > p.epsilon());
  CHECK(p.flatten_halfwidth() <= Rational(1, 6));
}

TEST_CASE("path functions at the levels") {
  const PathProfile<Rational> p(3, Rational(1), Rational(1, 12),
                                {QVec{Rational(1, 2), Rational(-3, 10)}, QVec{Rational(-1, 5), Rational(0)}});
  CHECK(path_x(p, Rational(0)) == QVec{0, 0});
  for (int k = 1; k < 3; ++k) {
    const Rational yk = p.level(k);
    CHECK(path_x(p, yk) == Rational(1, 2) * p.u(k) + p.v(k - 1));
    CHECK(path_x(p, Rational(yk + p.epsilon())) == p.v(k));
    CHECK(path_x(p, Rational(yk - p.epsilon())) == p.v(k - 1));
    const auto plus = sign_abs(p.u(k)).second;
    CHECK(path_rho(p, yk) == QVec::ones(2) - plus);
    CHECK(path_rho(p, Rational(yk + p.epsilon())) == QVec::ones(2));
    CHECK(path_rho(p, Rational(yk - p.epsilon())) == QVec::ones(2));
  }
  CHECK(path_rho(p, Rational(1, 2)) == QVec::ones(2));
  CHECK_THROWS_AS(path_x(p, Rational(-1, 100)), DomainError);
  CHECK_THROWS_AS(path_rho(p, Rational(101, 100)), DomainError);
}

TEST_CASE("path functions are continuous and rho stays in (0, 1]") {
  Rng rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const auto p = random_profile(rng, 1 + rng.below(3));
    const Rational delta(1, 1000000);
    Rational lip(0);
    for (const auto& u : p.offsets()) lip = std::max(lip, Rational(norm_inf(u) / p.epsilon()));
    for (int k = 1; k < p.layers(); ++k) {
      for (const Rational& bp : {Rational(p.level(k) - p.epsilon()), p.level(k), Rational(p.level(k) + p.epsilon())}) {
        for (const Rational& y : {Rational(bp - delta), Rational(bp + delta)}) {
          CHECK(norm_inf(path_x(p, y) - path_x(p, bp)) <= lip * delta);
          CHECK(norm_inf(path_rho(p, y) - path_rho(p, bp)) <= lip * delta);
        }
      }
    }
    for (int i = 0; i <= 200; ++i) {
      const auto rho = path_rho(p, Rational(p.height() * i / 200));
      for (const auto& c : rho) CHECK((c > 0 && c <= 1));
    }
  }
}

TEST_CASE("horizontal constant") {
  CHECK(horizontal_constant(PathProfile<double>(2, 1.0, 0.1, {Vec{0.0, 0.0}})) == 0.0);
  CHECK(horizontal_constant(PathProfile<double>(2, 1.0, 0.1, {Vec{0.5, -0.3}})) == 0.5);
  CHECK(horizontal_constant(PathProfile<double>(3, 1.0, 0.1, {Vec{0.2}, Vec{-0.7}})) == doctest::Approx(0.9));
}

TEST_CASE("boundary partition on sample faces") {
  const QVec u{Rational(-1, 10), Rational(1, 5), Rational(0)};
  const Rational h(1, 2);
  auto f = partition_boundary(u, QVec{-h, 0, 0});
  CHECK((f.plus && !f.minus && !f.updown));
  f = partition_boundary(u, QVec{0, h, 0});
  CHECK((f.plus && !f.minus && !f.updown));
  f = partition_boundary(u, QVec{h, 0, 0});
  CHECK((!f.plus && f.minus && !f.updown));
  f = partition_boundary(u, QVec{0, 0, h});
  CHECK((!f.plus && !f.minus && f.updown));
  f = partition_boundary(u, QVec{0, 0, -h});
  CHECK((!f.plus && !f.minus && f.updown));
  // corner shared by two faces belongs to both parts
  f = partition_boundary(u, QVec{-h, 0, h});
  CHECK((f.plus && f.updown && !f.minus));

  const QVec w{Rational(1, 10), Rational(-1, 5), Rational(-3, 10)};
  Rng rng(4);
  for (int i = 0; i < 500; ++i) {
    std::vector<Rational> x(3);
    for (auto& c : x) c = Rational(static_cast<long>(rng.below(101)) - 50, 100);
    x[rng.below(3)] = rng.below(2) ? h : Rational(-h);
    const auto g = partition_boundary(w, QVec(x));
    CHECK((g.plus || g.minus));
    CHECK_FALSE(g.updown);
  }
  CHECK_THROWS_AS(partition_boundary(QVec{0, 0}, QVec{h, 0}), InvalidParameterError);
  CHECK_THROWS_AS(partition_boundary(u, QVec{0, 0, 0}), DomainError);
  CHECK_THROWS_AS(partition_boundary(u, QVec{1, 0, 0}), DomainError);
}

TEST_CASE("boundary parts cover the boundary and are mirror images") {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t h = 1 + rng.below(4);
    std::vector<double> uc(h);
    for (auto& c : uc) c = rng.below(4) == 0 ? 0.0 : rng.uniform(-0.99, 0.99);
    uc[rng.below(h)] = 0.5;
    const Vec u(uc);
    for (int i = 0; i < 500; ++i) {
      std::vector<double> x(h);
      for (auto& c : x) c = rng.uniform(-0.5, 0.5);
      x[rng.below(h)] = rng.below(2) ? 0.5 : -0.5;
      const Vec xv(x);
      const auto f = partition_boundary(u, xv);
      const auto g = partition_boundary(u, -xv);
      CHECK((f.plus || f.minus || f.updown));
      CHECK(f.minus == g.plus);
      CHECK(f.updown == g.updown);
    }
  }
}

TEST_CASE("root prism of the unit square") {
  const auto pair = SelfAffinePair::standard({3, 3}, {0});
  const Prism p = root_prism(pair);
  CHECK(p.bottom_center == Vec{0.5});
  CHECK(p.bottom_height == 0.0);
  CHECK(p.slant == Vec{0.0});
  CHECK(p.height == 1.0);
  CHECK(p.contains(Vec{0.0, 0.5}));
  CHECK_FALSE(p.contains(Vec{1.1, 0.5}));
  CHECK(p.on_vertical_boundary(Vec{1.0, 0.5}, 1e-12));
  CHECK_FALSE(p.on_vertical_boundary(Vec{0.5, 0.5}, 1e-12));
}

TEST_CASE("root prism is fixed by the level-1 system") {
  for (const auto& pair : {figure_pair(), SelfAffinePair::standard({3, -3}, {2}),
                           SelfAffinePair::standard({-2, 2, -4}, {Rational(3, 2), -1})}) {
    const Prism root = root_prism(pair);
    const auto kids = ifs_prisms(pair, 1);
    REQUIRE(kids.size() == pair.layer_count());
    CHECK(kids.front().bottom_height == doctest::Approx(root.bottom_height));
    CHECK(kids.back().top_height() == doctest::Approx(root.top_height()));
    CHECK(norm_inf(kids.front().bottom_center - root.bottom_center) < 1e-12);
    CHECK(norm_inf(kids.back().top_center() - root.top_center()) < 1e-12);
    for (std::size_t k = 1; k < kids.size(); ++k) {
      CHECK(kids[k].bottom_height == doctest::Approx(kids[k - 1].top_height()));
      CHECK(kids[k].height == doctest::Approx(root.height / kids.size()));
    }
  }
}

TEST_CASE("iteration with no slant slices the prism") {
  const auto pair = SelfAffinePair::standard({3, 3}, {0});
  const Prism prism = root_prism(pair);
  const PathProfile<double> profile(3, 1.0, 1.0 / 12, {Vec{0.0}, Vec{0.0}});
  const auto [map, kids] = iterate_once(prism, pair, profile);
  REQUIRE(kids.size() == 3);
  for (int k = 0; k < 3; ++k) {
    CHECK(kids[k].bottom_center == Vec{0.5});
    CHECK(kids[k].bottom_height == doctest::Approx(k / 3.0));
    CHECK(kids[k].height == doctest::Approx(1.0 / 3));
    CHECK(norm_inf(kids[k].slant) == 0.0);
  }
  for (int i = 0; i <= 20; ++i) {
    const Vec bottom{i / 20.0, 0.0}, top{i / 20.0, 1.0};
    CHECK(map.evaluate(bottom) == bottom);
    CHECK(map.evaluate(top) == top);
  }
  CHECK_THROWS_AS(iterate_once(prism, pair, PathProfile<double>(2, 1.0, 0.1, {Vec{0.0}})), InconsistentParameterError);
}

TEST_CASE("children of the first iteration") {
  const auto pair = figure_pair();
  const Prism prism = root_prism(pair);
  const auto profile = default_profile(pair);
  CHECK(profile.layers() == 3);
  CHECK(profile.height() == 1.0);
  CHECK(profile.epsilon() == doctest::Approx(1.0 / 12));
  const auto [map, kids] = iterate_once(prism, pair, profile);
  const auto ifs = ifs_prisms(pair, 1);
  for (int k = 0; k < 3; ++k) {
    CHECK(kids[k].bottom_height == doctest::Approx(prism.bottom_height + k * prism.height / 3));
    CHECK(norm_inf(kids[k].bottom_center - ifs[k].bottom_center) < 1e-12);
    CHECK(norm_inf(kids[k].slant - ifs[k].slant) < 1e-12);
    if (k > 0) CHECK(norm_inf(kids[k].bottom_center - kids[k - 1].top_center() - profile.u(k)) < 1e-12);
  }
}

TEST_CASE("image of the prism is the union of the children") {
  for (const auto& pair : {figure_pair(), SelfAffinePair::standard({3, -3}, {2}),
                           SelfAffinePair::standard({2, -2}, {Rational(-3, 2)})}) {
    const Prism prism = root_prism(pair);
    const auto [map, kids] = iterate_once(prism, pair, default_profile(pair));
    const std::size_t h = prism.dimension() - 1;
    const int n = 20;
    std::size_t total = 1;
    for (std::size_t j = 0; j <= h; ++j) total *= n;
    std::size_t forward_ok = 0, backward_ok = 0;
    for (std::size_t idx = 0; idx < total; ++idx) {
      std::size_t rest = idx;
      std::vector<double> w(h);
      for (auto& c : w) {
        c = (rest % n + 0.5) / n - 0.5;
        rest /= n;
      }
      const double tau = (rest % n + 0.5) / n;
      const Vec img = map.evaluate(prism.point(Vec(w), tau));
      for (const auto& k : kids) {
        if (k.contains(img, 1e-9)) {
          ++forward_ok;
          break;
        }
      }
      const auto& kid = kids[idx % kids.size()];
      if (prism.contains(map.inverse(kid.point(Vec(w), tau)), 1e-9)) ++backward_ok;
    }
    CHECK(forward_ok == total);
    CHECK(backward_ok == total);
  }
}

TEST_CASE("every stage inverts") {
  const auto pair = figure_pair();
  const Prism prism = root_prism(pair);
  const OneIteration it(prism, default_profile(pair));
  Rng rng(21);
  double worst = 0.0, worst_full = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const Vec x = random_in(rng, prism, 1.5);
    for (auto s : {Stage::shear, Stage::squeeze, Stage::translate, Stage::flatten, Stage::restore}) {
      // squeeze..flatten act on normalized coordinates, so feed them sheared points
      const Vec in = s == Stage::shear ? x : it.stage_forward(Stage::shear, x);
      worst = std::max(worst, norm_inf(it.stage_inverse(s, it.stage_forward(s, in)) - in));
    }
    worst_full = std::max(worst_full, norm_inf(it.inverse(it.forward(x)) - x));
  }
  CHECK(worst < 1e-9);
  CHECK(worst_full < 1e-9);
}

TEST_CASE("iteration is the identity off the slab") {
  const auto pair = SelfAffinePair::standard({3, -3}, {2});
  const Prism prism = root_prism(pair);
  const OneIteration it(prism, default_profile(pair));
  for (double y : {-3.0, prism.bottom_height, prism.top_height(), prism.top_height() + 0.5}) {
    for (double x : {-4.0, 0.0, 0.3, 7.0}) CHECK(it.forward(Vec{x, y}) == Vec{x, y});
  }
}

TEST_CASE("composed maps") {
  const auto pair = figure_pair();
  const Prism prism = root_prism(pair);
  const auto profile = default_profile(pair);
  const auto h0 = compose_h(prism, pair, profile, 0);
  const auto h1 = compose_h(prism, pair, profile, 1);
  const auto once = iterate_once(prism, pair, profile).first;
  Rng rng(5);
  double dev0 = 0.0, dev1 = 0.0, inv = 0.0;
  const auto h3 = compose_h(prism, pair, profile, 3);
  for (int i = 0; i < 10000; ++i) {
    const Vec x = random_in(rng, prism, 0.6);
    dev0 = std::max(dev0, norm_inf(h0.evaluate(x) - x));
    dev1 = std::max(dev1, norm_inf(h1.evaluate(x) - once.evaluate(x)));
    if (i < 2000) inv = std::max(inv, norm_inf(h3.inverse(h3.evaluate(x)) - x));
  }
  CHECK(dev0 == 0.0);
  CHECK(dev1 == 0.0);
  CHECK(inv < 1e-9);

  CHECK(h3.depth() == 3);
  CHECK(h3.truncated(1).depth() == 1);
  const auto level2 = h3.prisms_at_level(2);
  const auto ifs2 = ifs_prisms(pair, 2);
  REQUIRE(level2.size() == ifs2.size());
  for (std::size_t k = 0; k < level2.size(); ++k) {
    CHECK(norm_inf(level2[k].bottom_center - ifs2[k].bottom_center) < 1e-9);
    CHECK(level2[k].bottom_height == doctest::Approx(ifs2[k].bottom_height));
  }
  const auto steps = h3.trajectory(prism.point(Vec{0.1, -0.2}, 0.4));
  REQUIRE(steps.size() == 4);
  CHECK(steps.back().point == h3.evaluate(prism.point(Vec{0.1, -0.2}, 0.4)));
  CHECK_THROWS_AS(compose_h(prism, pair, profile, -1), InvalidParameterError);
}

TEST_CASE("level profiles") {
  const auto pair = SelfAffinePair::standard({3, -3}, {2});
  const auto root = default_profile(pair);
  const auto l0 = level_profile(pair, root, 0);
  CHECK(l0.u(1) == root.u(1));
  const auto l1 = level_profile(pair, root, 1);
  // odd levels with p_d < 0 reverse the layer order and negate
  CHECK(l1.u(1)[0] == doctest::Approx(-root.u(2)[0] / 3));
  CHECK(l1.u(2)[0] == doctest::Approx(-root.u(1)[0] / 3));
  const auto l2 = level_profile(pair, root, 2);
  CHECK(l2.u(1)[0] == doctest::Approx(root.u(1)[0] / 9));
}
