#include <doctest.h>

#include <set>

#include "cms/msp.hpp"
#include "cms/saup.hpp"
#include "support/generators.hpp"

using namespace cms;
using namespace cms::testing;

TEST_CASE("validation accepts a bare sink") {
  CHECK(validate_msp(sink_msp(3.0)).empty());
}

TEST_CASE("validation flags probability sums, cycles, bad values") {
  Msp m;
  m.start = 0;
  m.states.resize(3);
  m.states[1] = {0.0, {}};
  m.states[2] = {1.0, {}};
  MspAction act;
  act.cost = 0.2;
  act.transitions = {{1, 0.5}, {2, 0.4}};
  m.states[0].actions = {act};
  auto violations = validate_msp(m);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].find("sum to") != std::string::npos);

  Msp cyclic;
  cyclic.start = 0;
  cyclic.states.resize(2);
  MspAction fwd;
  fwd.cost = 0.1;
  fwd.transitions = {{1, 1.0}};
  MspAction back;
  back.cost = 0.1;
  back.transitions = {{0, 1.0}};
  cyclic.states[0].actions = {fwd};
  cyclic.states[1].actions = {back};
  violations = validate_msp(cyclic);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].find("cycle") != std::string::npos);

  Msp bad_value = sink_msp(1.0);
  bad_value.states.push_back({3.0, {{0.5, {{0, 1.0}}}}});
  CHECK(!validate_msp(bad_value).empty());

  Msp free_action = box_msp(0.0, {{1.0, 1.0}});
  CHECK(!validate_msp(free_action).empty());
}

TEST_CASE("bandit recognition") {
  CHECK(is_bandit(two_stage_bandit()));
  CHECK(is_bandit(sink_msp(0.0)));
  CHECK(!is_bandit(two_action_msp()));
}

TEST_CASE("policies are checked against the process") {
  const Msp m = two_action_msp();
  StationaryPolicy pi(4, PolicyDecision::discard());
  pi[0] = PolicyDecision::advance(7);
  CHECK_THROWS_AS(expected_performance(m, pi), PolicyMismatchError);
  pi[0] = PolicyDecision::claim();  // claims are sink-only
  CHECK_THROWS_AS(expected_performance(m, pi), PolicyMismatchError);
  CHECK_THROWS_AS(expected_performance(m, StationaryPolicy(2)), PolicyMismatchError);
}

TEST_CASE("simulating a bare sink") {
  const Msp m = sink_msp(5.0);
  StationaryPolicy claim = {PolicyDecision::claim()};
  StationaryPolicy discard = {PolicyDecision::discard()};
  CHECK(simulate_policy(m, claim, 1).performance == 5.0);
  CHECK(simulate_policy(m, claim, 1).transcript.terminal == Terminal::kClaimed);
  CHECK(simulate_policy(m, discard, 1).performance == 0.0);
}

TEST_CASE("simulation matches the exact expectation on the coin box") {
  const Msp m = box_msp(0.1, {{0.0, 0.5}, {1.0, 0.5}});
  const StationaryPolicy pi = full_advance_policy(m);
  CHECK(expected_performance(m, pi) == doctest::Approx(0.4));
  double total = 0.0;
  const int trials = 100000;
  for (int t = 0; t < trials; ++t) {
    total += simulate_policy(m, pi, derive_seed(11, t)).performance;
  }
  // SE of one trial is 0.5/sqrt(trials).
  CHECK(total / trials == doctest::Approx(0.4).epsilon(0.02));
}

TEST_CASE("identical seeds give identical transcripts") {
  Rng meta(31337);
  for (int trial = 0; trial < 20; ++trial) {
    const Msp m = random_msp(meta);
    const auto policies = enumerate_stationary_policies(m, 4096);
    const StationaryPolicy& pi = policies[meta.next() % policies.size()];
    const auto a = simulate_policy(m, pi, 12345);
    const auto b = simulate_policy(m, pi, 12345);
    REQUIRE(a.transcript.steps.size() == b.transcript.steps.size());
    for (std::size_t i = 0; i < a.transcript.steps.size(); ++i) {
      CHECK(a.transcript.steps[i].state == b.transcript.steps[i].state);
      CHECK(a.transcript.steps[i].action == b.transcript.steps[i].action);
    }
    CHECK(a.transcript.terminal == b.transcript.terminal);
    CHECK(a.performance == b.performance);
  }
}

TEST_CASE("claiming a worthless sink adds nothing") {
  const Msp m = box_msp(0.1, {{0.0, 0.5}, {1.0, 0.5}});
  StationaryPolicy selective = full_advance_policy(m);
  selective[1] = PolicyDecision::discard();  // skip the zero sink
  CHECK(expected_performance(m, selective) == doctest::Approx(0.4));
}

TEST_CASE("tree unfolding of a tree is isomorphic") {
  const Msp m = two_stage_bandit();
  const TreeMsp tree = tree_msp(m);
  CHECK(tree.msp.num_states() == m.num_states());
  CHECK(expected_performance(tree.msp, full_advance_policy(tree.msp)) ==
        doctest::Approx(expected_performance(m, full_advance_policy(m))));
}

TEST_CASE("tree unfolding splits shared states per path") {
  // Diamond: two transitions into a shared middle state.
  Msp diamond;
  diamond.start = 0;
  diamond.states.resize(4);
  diamond.states[3] = {2.0, {}};
  MspAction top;
  top.cost = 0.1;
  top.transitions = {{1, 0.5}, {2, 0.5}};
  diamond.states[0].actions = {top};
  MspAction via1;
  via1.cost = 0.1;
  via1.transitions = {{3, 1.0}};
  MspAction via2 = via1;
  diamond.states[1].actions = {via1};
  diamond.states[2].actions = {via2};
  const TreeMsp tree = tree_msp(diamond);
  int copies = 0;
  for (int src : tree.source_state) copies += src == 3;
  CHECK(copies == 2);

  // Two actions fanning into a shared middle layer of three states, each
  // reached once per action: six middle transcripts.
  Msp layered;
  layered.start = 0;
  layered.states.resize(7);
  for (int mid = 1; mid <= 3; ++mid) {
    MspAction down;
    down.cost = 0.1;
    down.transitions = {{4, 0.5}, {5, 0.25}, {6, 0.25}};
    layered.states[static_cast<std::size_t>(mid)].actions = {down};
  }
  layered.states[4] = {1.0, {}};
  layered.states[5] = {0.0, {}};
  layered.states[6] = {3.0, {}};
  MspAction a;
  a.cost = 0.2;
  a.transitions = {{1, 0.5}, {2, 0.25}, {3, 0.25}};
  MspAction b = a;
  layered.states[0].actions = {a, b};
  const TreeMsp tree2 = tree_msp(layered);
  int middles = 0;
  for (int src : tree2.source_state) middles += src >= 1 && src <= 3;
  CHECK(middles == 6);

  CHECK_THROWS_AS(tree_msp(layered, 5), SizeLimitError);
}

TEST_CASE("induced bandit restricts to the chosen action") {
  const Msp m = two_action_msp();
  StationaryPolicy pi(4, PolicyDecision::discard());
  pi[0] = PolicyDecision::advance(1);
  pi[3] = PolicyDecision::claim();
  const InducedBandit bandit = induced_bandit(m, pi);
  CHECK(bandit.msp.num_states() == 2);  // start + the worth-2 sink
  CHECK(is_bandit(bandit.msp));
  CHECK(expected_performance(bandit.msp, full_advance_policy(bandit.msp)) ==
        doctest::Approx(1.6));
}

TEST_CASE("halting at the start induces a worthless sink") {
  const Msp m = two_action_msp();
  StationaryPolicy pi(4, PolicyDecision::discard());
  const InducedBandit bandit = induced_bandit(m, pi);
  CHECK(bandit.msp.num_states() == 1);
  CHECK(bandit.msp.state(0).is_sink());
  CHECK(bandit.msp.state(0).value == 0.0);
}

TEST_CASE("induced bandit preserves expected performance for every policy") {
  Rng meta(404);
  for (int trial = 0; trial < 25; ++trial) {
    const Msp m = random_msp(meta);
    for (const StationaryPolicy& pi : enumerate_stationary_policies(m, 2048)) {
      const InducedBandit bandit = induced_bandit(m, pi);
      CHECK(expected_performance(m, pi) ==
            doctest::Approx(expected_performance(
                                bandit.msp, full_advance_policy(bandit.msp)))
                .epsilon(1e-12));
    }
  }
}

TEST_CASE("tree unfolding preserves the optimal priced value") {
  Rng meta(808);
  for (int trial = 0; trial < 25; ++trial) {
    const Msp m = random_msp(meta);
    const TreeMsp tree = tree_msp(m);
    for (double tau : {0.0, 0.3, 1.1}) {
      CHECK(solve_saup(m, tau).value ==
            doctest::Approx(solve_saup(tree.msp, tau).value).epsilon(1e-9));
    }
  }
}
