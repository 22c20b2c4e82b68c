#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cms/common.hpp"

namespace cms {

// A Markov Search Process: a finite acyclic decision process with strictly
// positive action costs and rewards available only at sink states. A state is
// a sink iff it has no actions.
struct Transition {
  int target = 0;
  double probability = 0.0;
};

struct MspAction {
  double cost = 0.0;
  std::vector<Transition> transitions;
};

struct MspState {
  double value = 0.0;
  std::vector<MspAction> actions;
  bool is_sink() const { return actions.empty(); }
};

struct Msp {
  std::vector<MspState> states;
  int start = 0;

  int num_states() const { return static_cast<int>(states.size()); }
  const MspState& state(int s) const { return states[static_cast<std::size_t>(s)]; }
};

// Returns one human-readable message per violated model rule; empty iff valid.
// Violations are data, not failures.
std::vector<std::string> validate_msp(const Msp& m);

// Throws ParameterError with the joined violation list if the MSP is invalid.
void require_valid(const Msp& m);

// True iff every state has at most one action.
bool is_bandit(const Msp& m);

// States in an order where every transition goes from earlier to later.
// Assumes a valid (acyclic) MSP.
std::vector<int> topological_order(const Msp& m);

// Per-state decision of a stationary deterministic policy. Claiming is only
// legal at sinks; halting without a claim is legal anywhere.
struct PolicyDecision {
  enum class Kind { kAdvance, kClaim, kDiscard };
  Kind kind = Kind::kDiscard;
  int action = -1;  // meaningful only for kAdvance

  static PolicyDecision advance(int a) { return {Kind::kAdvance, a}; }
  static PolicyDecision claim() { return {Kind::kClaim, -1}; }
  static PolicyDecision discard() { return {Kind::kDiscard, -1}; }
};

using StationaryPolicy = std::vector<PolicyDecision>;

std::vector<std::string> validate_policy(const Msp& m, const StationaryPolicy& pi);
void require_legal(const Msp& m, const StationaryPolicy& pi);

// Advance with action 0 at every non-sink, claim at every sink. The natural
// policy to evaluate an induced bandit with.
StationaryPolicy full_advance_policy(const Msp& m);

struct TranscriptStep {
  int action = 0;
  int state = 0;
};

enum class Terminal { kNonHalted, kClaimed, kNotClaimed };

struct Transcript {
  std::vector<TranscriptStep> steps;
  Terminal terminal = Terminal::kNonHalted;
};

struct SimulationResult {
  Transcript transcript;
  double performance = 0.0;
};

// Runs pi on m with the seeded generator; identical seeds give bit-identical
// transcripts. Performance is claimed value minus incurred costs.
SimulationResult simulate_policy(const Msp& m, const StationaryPolicy& pi,
                                 std::uint64_t seed);

// Exact E[performance] of pi on m by backward induction over the DAG.
double expected_performance(const Msp& m, const StationaryPolicy& pi);

// Exact Pr[pi claims] by the same induction.
double claim_probability(const Msp& m, const StationaryPolicy& pi);

// The tree unfolding of m: one state per non-halted transcript, so that the
// current state encodes the full history. Can be exponential in the depth of
// m; exceeding node_budget raises SizeLimitError.
struct TreeMsp {
  Msp msp;
  std::vector<int> source_state;  // tree state -> originating state of m
};

TreeMsp tree_msp(const Msp& m, int node_budget = kDefaultTreeNodeBudget);

// The bandit obtained by fixing pi on m: the sole action at each state where
// pi advances is pi's action; states where pi halts become sinks whose value
// is V(s) if pi claims there and 0 otherwise. Restricted to states reachable
// under pi.
struct InducedBandit {
  Msp msp;
  std::vector<int> source_state;  // bandit state -> state of m
};

InducedBandit induced_bandit(const Msp& m, const StationaryPolicy& pi);

}  // namespace cms
