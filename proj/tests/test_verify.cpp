#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "tiletopo/parallel.hpp"
#include "tiletopo/random.hpp"
#include "tiletopo/verify.hpp"

using namespace tiletopo;

namespace {

double brute_directed(const std::vector<Vec>& a, const std::vector<Vec>& b) {
  double worst = 0.0;
  for (const auto& p : a) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& q : b) best = std::min(best, norm_inf(p - q));
    worst = std::max(worst, best);
  }
  return worst;
}

double brute(const std::vector<Vec>& a, const std::vector<Vec>& b) {
  return std::max(brute_directed(a, b), brute_directed(b, a));
}

std::vector<Vec> random_cloud(Rng& rng, std::size_t n, std::size_t d, double scale) {
  std::vector<Vec> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> c(d);
    for (auto& x : c) x = rng.uniform(-scale, scale);
    out.emplace_back(std::move(c));
  }
  return out;
}

struct Degenerate {
  SelfAffinePair pair = SelfAffinePair::standard({3, 3}, {0});
  Prism prism = root_prism(pair);
  PathProfile<double> profile{3, 1.0, 1.0 / 12, {Vec{0.0}, Vec{0.0}}};
};

}  // namespace

TEST_CASE("hausdorff basics") {
  Rng rng(1);
  const auto a = random_cloud(rng, 100, 3, 1.0);
  CHECK(hausdorff(a, a) == 0.0);
  CHECK(hausdorff({Vec{0.0, 0.0}}, {Vec{0.3, -0.7}}) == 0.7);
  std::vector<Vec> shifted;
  for (const auto& p : a) shifted.push_back(p + Vec{0.25, 0.0, 0.0});
  CHECK(hausdorff(a, shifted) == brute(a, shifted));
  CHECK_THROWS_AS(hausdorff({}, a), InvalidArgumentError);
  CHECK_THROWS_AS(hausdorff({Vec{0.0}}, a), DimensionError);
  CHECK_THROWS_AS(GridIndex(std::vector<Vec>{}), InvalidArgumentError);
}

TEST_CASE("grid index agrees with brute force") {
  Rng rng(2);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t d = 1 + rng.below(4);
    // clustered clouds exercise empty cells and long ring searches
    auto a = random_cloud(rng, 1 + rng.below(300), d, 1.0);
    auto b = random_cloud(rng, 1 + rng.below(300), d, trial % 3 == 0 ? 10.0 : 1.0);
    if (trial % 5 == 0) b.push_back(Vec(std::vector<double>(d, 1e3)));
    CHECK(hausdorff(a, b) == brute(a, b));
    const GridIndex idx(b);
    for (const auto& q : random_cloud(rng, 50, d, 20.0)) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& p : b) best = std::min(best, norm_inf(q - p));
      CHECK(idx.nearest_distance(q) == best);
    }
  }
  // all points identical
  const std::vector<Vec> same(20, Vec{1.0, 2.0});
  CHECK(hausdorff(same, {Vec{1.0, 3.0}}) == 1.0);
}

TEST_CASE("hausdorff is a pseudometric") {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_cloud(rng, 40, 2, 1.0), b = random_cloud(rng, 30, 2, 1.5), c = random_cloud(rng, 50, 2, 0.5);
    CHECK(hausdorff(a, b) == hausdorff(b, a));
    CHECK(hausdorff(a, c) <= hausdorff(a, b) + hausdorff(b, c) + 1e-12);
  }
}

TEST_CASE("distance to an implicit digit cloud") {
  Rng rng(4);
  for (const auto& pair : {SelfAffinePair::standard({3, 3}, {2}), SelfAffinePair::standard({2, -3, 2}, {1, -2})}) {
    for (int n = 0; n <= 3; ++n) {
      const auto cloud = approximate(pair, n).points;
      const auto probe = random_cloud(rng, 200, pair.dimension(), 1.5);
      CHECK(hausdorff_to_digit_cloud(pair, n, probe) == hausdorff(probe, cloud));
    }
  }
  const auto pair = SelfAffinePair::standard({3, 3}, {2});
  CHECK(hausdorff_to_digit_cloud(pair, 4, approximate(pair, 4).points) == 0.0);
  CHECK_THROWS_AS(hausdorff_to_digit_cloud(pair, 2, {Vec{0.0}}), DimensionError);
}

TEST_CASE("injectivity check") {
  const Degenerate g;
  InjectivityOptions opt;
  opt.pairs = 5000;
  opt.seed = 3;
  const auto id = check_injectivity(compose_h(g.prism, g.pair, g.profile, 0), g.prism, opt);
  CHECK(id.passed);
  CHECK(id.statistic("min_image_separation") >= opt.delta);
  CHECK(id.count("pairs") == 5000);
  CHECK(id.count("coincidences") == 0);

  const auto one = check_injectivity(compose_h(g.prism, g.pair, g.profile, 1), g.prism, opt);
  CHECK(one.passed);
  CHECK(one.statistic("min_image_separation") >= opt.delta / 3 - 1e-12);

  opt.pairs = 0;
  CHECK_THROWS_AS(check_injectivity(compose_h(g.prism, g.pair, g.profile, 0), g.prism, opt), InvalidParameterError);
}

TEST_CASE("height check on the sliced square") {
  const Degenerate g;
  HeightOptions opt;
  opt.samples = 300;
  const auto rep = check_height_properties(compose_h(g.prism, g.pair, g.profile, 4), g.prism, opt);
  CHECK(rep.passed);
  CHECK(rep.count("stabilization_index") == 1);
  CHECK(rep.statistic("mean_stabilization_index") == 1.0);
  CHECK(rep.count("monotonicity_violations") == 0);
  CHECK_THROWS_AS(check_height_properties(compose_h(g.prism, g.pair, g.profile, 1), g.prism, opt),
                  InvalidParameterError);
}

TEST_CASE("convergence of the unit square") {
  const auto pair = SelfAffinePair::standard({2, 2}, {0});
  const Prism prism = root_prism(pair);
  const PathProfile<double> profile(2, 1.0, 0.125, {Vec{0.0}});
  const auto rep = check_convergence(pair, prism, profile, 0, 8);
  const double spacing = std::max(rep.statistic("horizontal_spacing"), rep.statistic("vertical_spacing"));
  CHECK(rep.statistic("hausdorff") <= 1.0 / 256 + spacing);
  CHECK(rep.passed);
  const auto cube = SelfAffinePair::standard({2, 2, 2}, {0, 0});
  CHECK_THROWS_AS(check_convergence(cube, prism, profile, 0, 2), DimensionError);
  ConvergenceOptions tight;
  tight.cloud_budget = 100;
  CHECK_THROWS_AS(check_convergence(pair, prism, profile, 0, 8, tight), ResourceError);
}

TEST_CASE("reports do not depend on the worker count") {
  const auto pair = SelfAffinePair::standard({3, -3}, {2});
  const Prism prism = root_prism(pair);
  const auto map = compose_h(prism, pair, default_profile(pair), 3);
  InjectivityOptions io;
  io.pairs = 4000;
  io.seed = 9;
  HeightOptions ho;
  ho.samples = 100;
  ho.seed = 9;
  set_thread_count(1);
  const auto a = check_injectivity(map, prism, io).text() + check_height_properties(map, prism, ho).text();
  const auto a2 = check_injectivity(map, prism, io).text() + check_height_properties(map, prism, ho).text();
  set_thread_count(4);
  const auto b = check_injectivity(map, prism, io).text() + check_height_properties(map, prism, ho).text();
  set_thread_count(0);
  CHECK(a == a2);
  CHECK(a == b);
  io.seed = 10;
  CHECK(check_injectivity(map, prism, io).text() != check_injectivity(map, prism, InjectivityOptions{4000}).text());
}

TEST_CASE("report formatting") {
  VerificationReport r;
  r.check = "demo";
  r.seed = 7;
  r.parameters = {{"depth", "4"}};
  r.counts = {{"pairs", 10}};
  r.statistics = {{"value", 0.1}};
  r.tolerances = {{"value", 0.5}};
  r.passed = true;
  CHECK(r.text() ==
        "check=demo status=pass seed=7\n# param depth=4\n# count pairs=10\n# stat value=0.10000000000000001\n"
        "# tolerance value=0.5\n");
  CHECK(r.key_values() ==
        "demo.passed=1\ndemo.seed=7\ndemo.param.depth=4\ndemo.count.pairs=10\ndemo.stat.value=0.10000000000000001\n"
        "demo.tolerance.value=0.5\n");
  CHECK_THROWS_AS(r.statistic("missing"), InvalidArgumentError);
  CHECK_THROWS_AS(r.count("missing"), InvalidArgumentError);
}
