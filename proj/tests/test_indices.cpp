#include <doctest.h>

#include <cmath>

#include "cms/indices.hpp"
#include "support/generators.hpp"

using namespace cms;
using namespace cms::testing;

TEST_CASE("index of the coin box") {
  const Msp m = box_msp(0.1, {{0.0, 0.5}, {1.0, 0.5}});
  const CappedValueTable table = compute_indices(m);
  CHECK(table.sigma[0] == doctest::Approx(0.8));
  REQUIRE(table.kappa[0].support_size() == 2);
  CHECK(table.kappa[0].atoms()[0].value == doctest::Approx(0.0));
  CHECK(table.kappa[0].atoms()[1].value == doctest::Approx(0.8));
  CHECK(table.kappa[0].atoms()[1].probability == doctest::Approx(0.5));
}

TEST_CASE("two-stage indices compose through the capped law") {
  const Msp m = two_stage_bandit();
  const CappedValueTable table = compute_indices(m);
  CHECK(table.sigma[2] == doctest::Approx(0.8));
  CHECK(table.sigma[0] == doctest::Approx(0.6));
  // kappa entering s0: 0 w.p. 3/4 (direct zero sink or capped branch zero).
  const DiscreteDistribution& kappa0 = table.kappa[0];
  REQUIRE(kappa0.support_size() == 2);
  CHECK(kappa0.atoms()[0].value == doctest::Approx(0.0));
  CHECK(kappa0.atoms()[0].probability == doctest::Approx(0.75));
  CHECK(kappa0.atoms()[1].value == doctest::Approx(0.6));
}

TEST_CASE("sink indices are the sink value") {
  const CappedValueTable table = compute_indices(sink_msp(7.0));
  CHECK(table.sigma[0] == 7.0);
  CHECK(table.kappa[0].atoms()[0].value == 7.0);
}

TEST_CASE("negative index when the expected prize cannot cover the cost") {
  const Msp m = box_msp(10.0, {{0.0, 0.5}, {1.0, 0.5}});
  const CappedValueTable table = compute_indices(m);
  CHECK(table.sigma[0] == doctest::Approx(0.5 - 10.0));
}

TEST_CASE("non-bandits are rejected") {
  CHECK_THROWS_AS(compute_indices(two_action_msp()), ParameterError);
}

TEST_CASE("defining equation holds at every non-sink of random bandits") {
  Rng meta(1618);
  for (int trial = 0; trial < 60; ++trial) {
    const Msp m = random_bandit(meta);
    const CappedValueTable table = compute_indices(m);
    for (int s = 0; s < m.num_states(); ++s) {
      const MspState& st = m.state(s);
      if (st.is_sink()) continue;
      std::vector<std::pair<double, const DiscreteDistribution*>> parts;
      for (const Transition& t : st.actions.front().transitions) {
        parts.push_back({t.probability,
                         &table.kappa[static_cast<std::size_t>(t.target)]});
      }
      const DiscreteDistribution next = DiscreteDistribution::mixture(parts);
      CHECK(next.expected_surplus(table.sigma[static_cast<std::size_t>(s)]) ==
            doctest::Approx(st.actions.front().cost).epsilon(1e-9));
      // kappa support never exceeds sigma.
      CHECK(table.kappa[static_cast<std::size_t>(s)].max_value() <=
            table.sigma[static_cast<std::size_t>(s)] + 1e-12);
    }
  }
}

TEST_CASE("exposure requires halting unclaimed under a rising index") {
  const Msp m = two_stage_bandit();
  CHECK(!is_exposed(m, full_advance_policy(m)));

  // Halt unclaimed at s1 whose index 0.8 exceeds the start's 0.6.
  StationaryPolicy peek = full_advance_policy(m);
  peek[2] = PolicyDecision::discard();
  CHECK(is_exposed(m, peek));

  // Halting unclaimed at the start is never an exposure.
  StationaryPolicy never(m.states.size(), PolicyDecision::discard());
  CHECK(!is_exposed(m, never));
}

TEST_CASE("threshold policies advance and claim by level") {
  const Msp m = two_stage_bandit();
  SUBCASE("threshold below everything claims everywhere") {
    const StationaryPolicy pi = threshold_bandit_policy(m, -1.0, false);
    CHECK(pi[0].kind == PolicyDecision::Kind::kAdvance);
    CHECK(pi[2].kind == PolicyDecision::Kind::kAdvance);
    CHECK(pi[1].kind == PolicyDecision::Kind::kClaim);
    CHECK(pi[4].kind == PolicyDecision::Kind::kClaim);
  }
  SUBCASE("threshold above everything discards at the start") {
    const StationaryPolicy pi =
        threshold_bandit_policy(m, std::numeric_limits<double>::infinity(), false);
    CHECK(pi[0].kind == PolicyDecision::Kind::kDiscard);
  }
  SUBCASE("intermediate threshold halts immediately here") {
    const StationaryPolicy pi = threshold_bandit_policy(m, 0.7, true);
    CHECK(pi[0].kind == PolicyDecision::Kind::kDiscard);
    CHECK(claim_probability(m, pi) == 0.0);
  }
  SUBCASE("ties split by the flag") {
    // Exactly representable index: 0.5(1 - sigma) = 0.25 gives sigma = 0.5.
    const Msp coin = box_msp(0.25, {{0.0, 0.5}, {1.0, 0.5}});
    const StationaryPolicy at_sigma = threshold_bandit_policy(coin, 0.5, true);
    CHECK(at_sigma[0].kind == PolicyDecision::Kind::kAdvance);
    const StationaryPolicy strict = threshold_bandit_policy(coin, 0.5, false);
    CHECK(strict[0].kind == PolicyDecision::Kind::kDiscard);
  }
}

TEST_CASE("threshold policies claim exactly when the capped value passes") {
  Rng meta(271828);
  for (int trial = 0; trial < 60; ++trial) {
    const Msp m = random_bandit(meta);
    const CappedValueTable table = compute_indices(m);
    const DiscreteDistribution& kappa =
        table.kappa[static_cast<std::size_t>(m.start)];
    for (double tau : {0.0, 0.25, 0.6, 1.0, 2.5}) {
      for (bool tie : {true, false}) {
        const StationaryPolicy pi = threshold_bandit_policy(m, tau, tie);
        CHECK(!is_exposed(m, pi));
        CHECK(claim_probability(m, pi) ==
              doctest::Approx(kappa.tail_probability(tau, tie)).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("amortization sides on hand examples") {
  const Msp m = two_stage_bandit();
  SUBCASE("non-exposed threshold policy is tight") {
    const auto sides = amortization_sides(m, threshold_bandit_policy(m, 0.3, true));
    CHECK(sides.performance == doctest::Approx(sides.amortized).epsilon(1e-12));
  }
  SUBCASE("exposed policy loses strictly") {
    StationaryPolicy peek = full_advance_policy(m);
    peek[2] = PolicyDecision::discard();
    const auto sides = amortization_sides(m, peek);
    CHECK(sides.performance < sides.amortized - 1e-9);
    CHECK(sides.performance == doctest::Approx(-0.05));
  }
  SUBCASE("the do-nothing policy is zero on both sides") {
    StationaryPolicy never(m.states.size(), PolicyDecision::discard());
    const auto sides = amortization_sides(m, never);
    CHECK(sides.performance == 0.0);
    CHECK(sides.amortized == 0.0);
  }
}

TEST_CASE("amortization is an equality exactly for non-exposed policies") {
  Rng meta(6174);
  for (int trial = 0; trial < 40; ++trial) {
    const Msp m = random_bandit(meta, 5);
    for (const StationaryPolicy& pi : enumerate_stationary_policies(m, 1024)) {
      const auto sides = amortization_sides(m, pi);
      CHECK(sides.performance <= sides.amortized + 1e-9);
      if (is_exposed(m, pi)) {
        CHECK(sides.performance < sides.amortized - 1e-9);
      } else {
        CHECK(sides.performance == doctest::Approx(sides.amortized).epsilon(1e-9));
      }
    }
  }
}
