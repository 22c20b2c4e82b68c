#include <doctest.h>

#include <cmath>
#include <map>

#include "cms/matroid.hpp"
#include "support/generators.hpp"

using namespace cms;
using namespace cms::testing;

TEST_CASE("rank by greedy extension") {
  const Matroid uni = Matroid::uniform(3, 2);
  CHECK(uni.rank({0, 1, 2}) == 2);
  CHECK(uni.rank({}) == 0);
  const Matroid part = Matroid::partition(3, {{0, 1}, {2}}, {1, 1});
  CHECK(part.rank({0, 1}) == 1);
  CHECK(part.rank({0, 2}) == 2);
}

TEST_CASE("explicit families are validated") {
  CHECK_NOTHROW(Matroid::explicit_family(2, {{}, {0}, {1}, {0, 1}}));
  // Missing empty set.
  CHECK_THROWS_AS(Matroid::explicit_family(2, {{0}}), ParameterError);
  // Not downward closed.
  CHECK_THROWS_AS(Matroid::explicit_family(2, {{}, {0, 1}}), ParameterError);
  // Downward closed but fails exchange: {0,1} and {2} with |{0,1}| > |{2}|.
  CHECK_THROWS_AS(
      Matroid::explicit_family(3, {{}, {0}, {1}, {2}, {0, 1}}),
      ParameterError);
}

TEST_CASE("polytope membership by enumeration") {
  const Matroid m = Matroid::uniform(2, 1);
  CHECK(polytope_member(m, {{0.5, 0.5}}).member);
  const PolytopeCheck bad = polytope_member(m, {{0.7, 0.7}});
  CHECK(!bad.member);
  CHECK(bad.violated == std::vector<int>{0, 1});
  CHECK(bad.excess == doctest::Approx(0.4));
  CHECK(!polytope_member(m, {{-0.1, 0.5}}).member);
  CHECK(!polytope_member(m, {{1.2, 0.0}}).member);
}

TEST_CASE("max weight greedy") {
  const Matroid uni = Matroid::uniform(3, 2);
  CHECK(max_weight_independent(uni, {5, 3, 1}) == std::vector<int>{0, 1});
  CHECK(max_weight_independent(uni, {-1, 0, -5}).empty());
  const Matroid part = Matroid::partition(3, {{0, 1}, {2}}, {1, 1});
  CHECK(max_weight_independent(part, {5, 3, 4}) == std::vector<int>{0, 2});
}

TEST_CASE("max weight greedy equals exhaustive search") {
  Rng meta(8);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = pick(meta, 1, 8);
    const Matroid m = random_matroid(meta, n);
    std::vector<double> w;
    for (int e = 0; e < n; ++e) w.push_back(0.25 * pick(meta, -4, 12));
    const auto greedy = max_weight_independent(m, w);
    double greedy_weight = 0.0;
    for (int e : greedy) greedy_weight += w[static_cast<std::size_t>(e)];
    double best = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      if (!m.independent_mask(mask)) continue;
      double total = 0.0;
      for (int e = 0; e < n; ++e) {
        if (mask & (1u << e)) total += w[static_cast<std::size_t>(e)];
      }
      best = std::max(best, total);
    }
    CHECK(greedy_weight == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("remaining value on hand examples") {
  const Matroid one = Matroid::uniform(1, 1);
  CHECK(remaining_value(one, {5.0}, {0}, {}) == doctest::Approx(5.0));
  CHECK(remaining_value(one, {5.0}, {0}, {0}) == 0.0);
  const Matroid uni = Matroid::uniform(3, 2);
  CHECK(remaining_value(uni, {5, 3, 1}, {0, 1, 2}, {0}) == doctest::Approx(3.0));
  CHECK(remaining_value(uni, {5, 3, 1}, {}, {0}) == 0.0);
  CHECK(remaining_value(uni, {5, 3, 1}, {}, {1, 2}) == 0.0);
  CHECK_THROWS_AS(remaining_value(Matroid::uniform(2, 1), {1, 1}, {0, 1}, {0, 1}),
                  ParameterError);
}

TEST_CASE("remaining value from scratch equals the greedy optimum") {
  Rng meta(44);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = pick(meta, 1, 7);
    const Matroid m = random_matroid(meta, n);
    std::vector<double> z;
    for (int e = 0; e < n; ++e) z.push_back(0.25 * pick(meta, 0, 10));
    const std::uint32_t available =
        static_cast<std::uint32_t>(meta.next() & ((1u << n) - 1));
    double expect = 0.0;
    std::vector<double> masked = z;
    for (int e = 0; e < n; ++e) {
      if (!(available & (1u << e))) masked[static_cast<std::size_t>(e)] = 0.0;
    }
    for (int e : max_weight_independent(m, masked)) {
      expect += masked[static_cast<std::size_t>(e)];
    }
    CHECK(remaining_value_mask(m, z, available, 0u) == doctest::Approx(expect));
  }
}

TEST_CASE("pipage sampling on the two-point rank-one polytope") {
  const Matroid m = Matroid::uniform(2, 1);
  const FractionalPoint q{{0.5, 0.5}};
  int first = 0;
  const int trials = 20000;
  for (int t = 0; t < trials; ++t) {
    const auto set = sample_feasible_set(m, q, derive_seed(5, t));
    REQUIRE(set.size() == 1);
    first += set[0] == 0;
  }
  const double freq = static_cast<double>(first) / trials;
  CHECK(std::abs(freq - 0.5) <= 4.0 * std::sqrt(0.25 / trials));
}

TEST_CASE("integral points round to themselves") {
  const Matroid m = Matroid::uniform(3, 2);
  CHECK(sample_feasible_set(m, {{1.0, 0.0, 1.0}}, 9) == std::vector<int>{0, 2});
}

TEST_CASE("partition sampling keeps the certain element") {
  const Matroid m = Matroid::partition(3, {{0, 1}, {2}}, {1, 1});
  const FractionalPoint q{{0.5, 0.5, 1.0}};
  PipageSampler sampler(m, q);
  int first = 0;
  const int trials = 20000;
  for (int t = 0; t < trials; ++t) {
    const auto set = sampler.sample(derive_seed(17, t));
    REQUIRE(set.size() == 2);
    CHECK(set[1] == 2);
    first += set[0] == 0;
  }
  CHECK(std::abs(first / static_cast<double>(trials) - 0.5) <=
        4.0 * std::sqrt(0.25 / trials));
}

TEST_CASE("infeasible points are rejected by the sampler") {
  CHECK_THROWS_AS(sample_feasible_set(Matroid::uniform(2, 1), {{0.7, 0.7}}, 1),
                  ParameterError);
}

TEST_CASE("sampled sets are independent with the right marginals") {
  Rng meta(1024);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = pick(meta, 2, 6);
    const Matroid m = random_matroid(meta, n);
    const FractionalPoint q = random_feasible_point(meta, m);
    PipageSampler sampler(m, q);
    std::vector<int> counts(static_cast<std::size_t>(n), 0);
    const int trials = 20000;
    for (int t = 0; t < trials; ++t) {
      const auto set = sampler.sample(derive_seed(meta.next(), t));
      CHECK(m.independent(set));
      for (int e : set) ++counts[static_cast<std::size_t>(e)];
    }
    for (int e = 0; e < n; ++e) {
      const double qe = q.q[static_cast<std::size_t>(e)];
      const double freq = counts[static_cast<std::size_t>(e)] /
                          static_cast<double>(trials);
      const double se = std::sqrt(std::max(qe * (1.0 - qe), 1e-12) / trials);
      CHECK(std::abs(freq - qe) <= 4.0 * se + 1e-9);
    }
  }
}

TEST_CASE("exact decomposition reconstructs the point") {
  Rng meta(2048);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = pick(meta, 1, 7);
    const Matroid m = random_matroid(meta, n);
    const FractionalPoint q = random_feasible_point(meta, m);
    const auto dq = exact_dq(m, q);
    double total = 0.0;
    std::vector<double> mass(static_cast<std::size_t>(n), 0.0);
    for (const auto& [p, set] : dq) {
      CHECK(m.independent(set));
      total += p;
      for (int e : set) mass[static_cast<std::size_t>(e)] += p;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    for (int e = 0; e < n; ++e) {
      CHECK(mass[static_cast<std::size_t>(e)] ==
            doctest::Approx(q.q[static_cast<std::size_t>(e)]).epsilon(1e-9));
    }
  }
}

TEST_CASE("exact decomposition of the two-point example") {
  const auto dq = exact_dq(Matroid::uniform(2, 1), {{0.5, 0.5}});
  REQUIRE(dq.size() == 2);
  std::map<std::vector<int>, double> by_set;
  for (const auto& [p, set] : dq) by_set[set] = p;
  CHECK(by_set[{0}] == doctest::Approx(0.5));
  CHECK(by_set[{1}] == doctest::Approx(0.5));
}

TEST_CASE("zero-capacity blocks forbid their elements") {
  const Matroid m = Matroid::partition(3, {{0, 1}, {2}}, {1, 0});
  CHECK(!m.independent({2}));
  CHECK(m.rank({0, 1, 2}) == 1);
  CHECK(max_weight_independent(m, {1.0, 2.0, 50.0}) == std::vector<int>{1});
  CHECK(!polytope_member(m, {{0.0, 0.0, 0.5}}).member);
  CHECK(sample_feasible_set(m, {{0.25, 0.75, 0.0}}, 3).size() == 1);
}
