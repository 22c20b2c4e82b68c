#include "cms/msp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cms/rng.hpp"

namespace cms {

std::vector<std::string> validate_msp(const Msp& m) {
  std::vector<std::string> violations;
  const int n = m.num_states();
  if (n == 0) {
    violations.push_back("no states");
    return violations;
  }
  if (m.start < 0 || m.start >= n) {
    violations.push_back("start state " + std::to_string(m.start) +
                         " out of range");
    return violations;
  }
  for (int s = 0; s < n; ++s) {
    const MspState& st = m.state(s);
    if (!std::isfinite(st.value) || st.value < 0.0) {
      violations.push_back("state " + std::to_string(s) +
                           ": value must be a finite nonnegative real");
    }
    if (!st.is_sink() && st.value != 0.0) {
      violations.push_back("state " + std::to_string(s) +
                           ": nonzero value on a non-sink");
    }
    for (std::size_t a = 0; a < st.actions.size(); ++a) {
      const MspAction& act = st.actions[a];
      const std::string where =
          "state " + std::to_string(s) + " action " + std::to_string(a);
      if (!(act.cost > 0.0) || !std::isfinite(act.cost)) {
        violations.push_back(where + ": cost must be strictly positive");
      }
      if (act.transitions.empty()) {
        violations.push_back(where + ": no transitions");
        continue;
      }
      double total = 0.0;
      for (const Transition& t : act.transitions) {
        if (t.target < 0 || t.target >= n) {
          violations.push_back(where + ": transition target out of range");
        }
        if (t.probability <= 0.0 || !std::isfinite(t.probability)) {
          violations.push_back(where +
                               ": transition probability must be positive");
        }
        total += t.probability;
      }
      if (std::abs(total - 1.0) > kTol) {
        violations.push_back(where + ": transition probabilities sum to " +
                             std::to_string(total) + ", expected 1");
      }
    }
  }

  // Cycle check on the state graph (edge s -> s' when some action reaches s'
  // with positive probability).
  std::vector<int> color(static_cast<std::size_t>(n), 0);  // 0 new, 1 open, 2 done
  std::vector<std::pair<int, std::size_t>> stack;
  bool cyclic = false;
  for (int root = 0; root < n && !cyclic; ++root) {
    if (color[static_cast<std::size_t>(root)] != 0) continue;
    stack.push_back({root, 0});
    color[static_cast<std::size_t>(root)] = 1;
    while (!stack.empty() && !cyclic) {
      auto& [s, edge] = stack.back();
      // Flattened edge index over (action, transition) pairs.
      std::size_t idx = edge;
      int next = -1;
      for (const MspAction& act : m.state(s).actions) {
        if (idx < act.transitions.size()) {
          next = act.transitions[idx].target;
          break;
        }
        idx -= act.transitions.size();
      }
      if (next < 0) {
        color[static_cast<std::size_t>(s)] = 2;
        stack.pop_back();
        continue;
      }
      ++edge;
      if (next >= n) continue;  // already reported above
      if (color[static_cast<std::size_t>(next)] == 1) {
        cyclic = true;
      } else if (color[static_cast<std::size_t>(next)] == 0) {
        color[static_cast<std::size_t>(next)] = 1;
        stack.push_back({next, 0});
      }
    }
  }
  if (cyclic) violations.push_back("state graph has a cycle; must be a DAG");
  return violations;
}

void require_valid(const Msp& m) {
  auto violations = validate_msp(m);
  if (violations.empty()) return;
  std::string msg = "invalid MSP:";
  for (const auto& v : violations) msg += "\n  " + v;
  throw ParameterError(msg);
}

bool is_bandit(const Msp& m) {
  return std::all_of(m.states.begin(), m.states.end(),
                     [](const MspState& s) { return s.actions.size() <= 1; });
}

std::vector<int> topological_order(const Msp& m) {
  const int n = m.num_states();
  std::vector<int> indegree(static_cast<std::size_t>(n), 0);
  for (const MspState& st : m.states) {
    for (const MspAction& a : st.actions) {
      for (const Transition& t : a.transitions) {
        ++indegree[static_cast<std::size_t>(t.target)];
      }
    }
  }
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(n));
  std::vector<int> queue;
  for (int s = 0; s < n; ++s) {
    if (indegree[static_cast<std::size_t>(s)] == 0) queue.push_back(s);
  }
  while (!queue.empty()) {
    int s = queue.back();
    queue.pop_back();
    order.push_back(s);
    for (const MspAction& a : m.state(s).actions) {
      for (const Transition& t : a.transitions) {
        if (--indegree[static_cast<std::size_t>(t.target)] == 0) {
          queue.push_back(t.target);
        }
      }
    }
  }
  if (order.size() != static_cast<std::size_t>(n)) {
    throw ParameterError("topological_order: graph has a cycle");
  }
  return order;
}

std::vector<std::string> validate_policy(const Msp& m, const StationaryPolicy& pi) {
  std::vector<std::string> violations;
  if (pi.size() != m.states.size()) {
    violations.push_back("policy covers " + std::to_string(pi.size()) +
                         " states, process has " +
                         std::to_string(m.states.size()));
    return violations;
  }
  for (int s = 0; s < m.num_states(); ++s) {
    const PolicyDecision& d = pi[static_cast<std::size_t>(s)];
    const MspState& st = m.state(s);
    switch (d.kind) {
      case PolicyDecision::Kind::kAdvance:
        if (st.is_sink()) {
          violations.push_back("state " + std::to_string(s) +
                               ": advance at a sink");
        } else if (d.action < 0 ||
                   d.action >= static_cast<int>(st.actions.size())) {
          violations.push_back("state " + std::to_string(s) +
                               ": action index out of range");
        }
        break;
      case PolicyDecision::Kind::kClaim:
        if (!st.is_sink()) {
          violations.push_back("state " + std::to_string(s) +
                               ": claim at a non-sink");
        }
        break;
      case PolicyDecision::Kind::kDiscard:
        break;
    }
  }
  return violations;
}

void require_legal(const Msp& m, const StationaryPolicy& pi) {
  auto violations = validate_policy(m, pi);
  if (violations.empty()) return;
  std::string msg = "policy does not match process:";
  for (const auto& v : violations) msg += "\n  " + v;
  throw PolicyMismatchError(msg);
}

StationaryPolicy full_advance_policy(const Msp& m) {
  StationaryPolicy pi(m.states.size());
  for (int s = 0; s < m.num_states(); ++s) {
    pi[static_cast<std::size_t>(s)] = m.state(s).is_sink()
                                          ? PolicyDecision::claim()
                                          : PolicyDecision::advance(0);
  }
  return pi;
}

SimulationResult simulate_policy(const Msp& m, const StationaryPolicy& pi,
                                 std::uint64_t seed) {
  require_legal(m, pi);
  Rng rng(seed);
  SimulationResult result;
  int s = m.start;
  double performance = 0.0;
  for (;;) {
    const PolicyDecision& d = pi[static_cast<std::size_t>(s)];
    if (d.kind == PolicyDecision::Kind::kClaim) {
      performance += m.state(s).value;
      result.transcript.terminal = Terminal::kClaimed;
      break;
    }
    if (d.kind == PolicyDecision::Kind::kDiscard) {
      result.transcript.terminal = Terminal::kNotClaimed;
      break;
    }
    const MspAction& act = m.state(s).actions[static_cast<std::size_t>(d.action)];
    performance -= act.cost;
    const double u = rng.uniform01();
    double cum = 0.0;
    int next = act.transitions.back().target;
    for (const Transition& t : act.transitions) {
      cum += t.probability;
      if (u < cum) {
        next = t.target;
        break;
      }
    }
    result.transcript.steps.push_back({d.action, next});
    s = next;
  }
  result.performance = performance;
  return result;
}

namespace {

// Backward induction for E[claimed value * claim_weight - costs]; claim_weight
// selects between performance (value at claims) and claim probability.
double policy_induction(const Msp& m, const StationaryPolicy& pi,
                        bool probability_mode) {
  require_legal(m, pi);
  const auto order = topological_order(m);
  std::vector<double> val(m.states.size(), 0.0);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int s = *it;
    const PolicyDecision& d = pi[static_cast<std::size_t>(s)];
    switch (d.kind) {
      case PolicyDecision::Kind::kClaim:
        val[static_cast<std::size_t>(s)] =
            probability_mode ? 1.0 : m.state(s).value;
        break;
      case PolicyDecision::Kind::kDiscard:
        val[static_cast<std::size_t>(s)] = 0.0;
        break;
      case PolicyDecision::Kind::kAdvance: {
        const MspAction& act =
            m.state(s).actions[static_cast<std::size_t>(d.action)];
        double v = probability_mode ? 0.0 : -act.cost;
        for (const Transition& t : act.transitions) {
          v += t.probability * val[static_cast<std::size_t>(t.target)];
        }
        val[static_cast<std::size_t>(s)] = v;
        break;
      }
    }
  }
  return val[static_cast<std::size_t>(m.start)];
}

}  // namespace

double expected_performance(const Msp& m, const StationaryPolicy& pi) {
  return policy_induction(m, pi, /*probability_mode=*/false);
}

double claim_probability(const Msp& m, const StationaryPolicy& pi) {
  return policy_induction(m, pi, /*probability_mode=*/true);
}

TreeMsp tree_msp(const Msp& m, int node_budget) {
  require_valid(m);
  TreeMsp tree;
  // Breadth-first unfolding: each tree node is a distinct non-halted
  // transcript of m, rooted at the empty transcript.
  tree.msp.start = 0;
  tree.msp.states.push_back({m.state(m.start).value, {}});
  tree.source_state.push_back(m.start);
  for (std::size_t node = 0; node < tree.msp.states.size(); ++node) {
    const int src = tree.source_state[node];
    const MspState& st = m.state(src);
    tree.msp.states[node].actions.reserve(st.actions.size());
    for (const MspAction& act : st.actions) {
      MspAction copy;
      copy.cost = act.cost;
      for (const Transition& t : act.transitions) {
        if (static_cast<int>(tree.msp.states.size()) >= node_budget) {
          throw SizeLimitError("tree_msp: node budget of " +
                               std::to_string(node_budget) + " exceeded");
        }
        const int child = static_cast<int>(tree.msp.states.size());
        tree.msp.states.push_back({m.state(t.target).value, {}});
        tree.source_state.push_back(t.target);
        copy.transitions.push_back({child, t.probability});
      }
      tree.msp.states[node].actions.push_back(std::move(copy));
    }
  }
  return tree;
}

InducedBandit induced_bandit(const Msp& m, const StationaryPolicy& pi) {
  require_valid(m);
  require_legal(m, pi);
  InducedBandit bandit;
  std::vector<int> remap(m.states.size(), -1);
  std::vector<int> frontier = {m.start};
  remap[static_cast<std::size_t>(m.start)] = 0;
  bandit.msp.start = 0;
  bandit.msp.states.emplace_back();
  bandit.source_state.push_back(m.start);
  while (!frontier.empty()) {
    const int src = frontier.back();
    frontier.pop_back();
    const int dst = remap[static_cast<std::size_t>(src)];
    const PolicyDecision& d = pi[static_cast<std::size_t>(src)];
    MspState& out = bandit.msp.states[static_cast<std::size_t>(dst)];
    if (d.kind == PolicyDecision::Kind::kAdvance) {
      const MspAction& act =
          m.state(src).actions[static_cast<std::size_t>(d.action)];
      MspAction sole;
      sole.cost = act.cost;
      for (const Transition& t : act.transitions) {
        int& mapped = remap[static_cast<std::size_t>(t.target)];
        if (mapped < 0) {
          mapped = static_cast<int>(bandit.msp.states.size());
          bandit.msp.states.emplace_back();
          bandit.source_state.push_back(t.target);
          frontier.push_back(t.target);
        }
        sole.transitions.push_back({mapped, t.probability});
      }
      // Note: `out` may have been invalidated by the emplacements above.
      bandit.msp.states[static_cast<std::size_t>(dst)].actions.push_back(
          std::move(sole));
    } else {
      out.value =
          d.kind == PolicyDecision::Kind::kClaim ? m.state(src).value : 0.0;
    }
  }
  return bandit;
}

}  // namespace cms
