#include "cms/indices.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <set>

namespace cms {

double solve_weitzman_index(const DiscreteDistribution& next_capped,
                            double cost) {
  if (!(cost > 0.0)) {
    throw ParameterError("solve_weitzman_index: cost must be positive");
  }
  const auto& atoms = next_capped.atoms();
  // Scan support descending; on each linear piece the surplus is
  // tail_sum - sigma * tail_prob.
  double tail_prob = 0.0;
  double tail_sum = 0.0;
  for (auto it = atoms.rbegin(); it != atoms.rend(); ++it) {
    const double surplus_here = tail_sum - it->value * tail_prob;
    if (surplus_here >= cost) {
      // Root lies above this atom, inside the previous piece.
      return (tail_sum - cost) / tail_prob;
    }
    tail_prob += it->probability;
    tail_sum += it->probability * it->value;
  }
  // Root below the minimum support point: E[(K - s)^+] = E[K] - s there.
  return tail_sum - cost;
}

CappedValueTable compute_indices(const Msp& m, int support_cap) {
  require_valid(m);
  if (!is_bandit(m)) {
    throw ParameterError("compute_indices: process is not a bandit");
  }
  CappedValueTable table;
  table.sigma.assign(m.states.size(), 0.0);
  table.kappa.assign(m.states.size(), DiscreteDistribution());
  const auto order = topological_order(m);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int s = *it;
    const MspState& st = m.state(s);
    if (st.is_sink()) {
      table.sigma[static_cast<std::size_t>(s)] = st.value;
      table.kappa[static_cast<std::size_t>(s)] =
          DiscreteDistribution::point_mass(st.value);
      continue;
    }
    const MspAction& act = st.actions.front();
    std::vector<std::pair<double, const DiscreteDistribution*>> parts;
    parts.reserve(act.transitions.size());
    for (const Transition& t : act.transitions) {
      parts.push_back(
          {t.probability, &table.kappa[static_cast<std::size_t>(t.target)]});
    }
    DiscreteDistribution next = DiscreteDistribution::mixture(parts);
    if (static_cast<int>(next.support_size()) > support_cap) {
      throw SizeLimitError("compute_indices: kappa support exceeds cap of " +
                           std::to_string(support_cap));
    }
    const double sigma = solve_weitzman_index(next, act.cost);
    table.sigma[static_cast<std::size_t>(s)] = sigma;
    table.kappa[static_cast<std::size_t>(s)] = next.capped(sigma);
  }
  return table;
}

namespace {

using StateMinKey = std::pair<int, std::uint64_t>;

StateMinKey state_min_key(int s, double m) {
  std::uint64_t bits;
  static_assert(sizeof(bits) == sizeof(m));
  std::memcpy(&bits, &m, sizeof(bits));
  return {s, bits};
}

}  // namespace

bool is_exposed(const Msp& m, const StationaryPolicy& pi) {
  if (!is_bandit(m)) {
    throw ParameterError("is_exposed: process is not a bandit");
  }
  require_legal(m, pi);
  const CappedValueTable table = compute_indices(m);
  std::set<StateMinKey> seen;
  // DFS over (state, min index over strictly earlier states).
  std::vector<std::pair<int, double>> stack = {
      {m.start, std::numeric_limits<double>::infinity()}};
  while (!stack.empty()) {
    auto [s, min_before] = stack.back();
    stack.pop_back();
    if (!seen.insert(state_min_key(s, min_before)).second) continue;
    const PolicyDecision& d = pi[static_cast<std::size_t>(s)];
    const double sigma = table.sigma[static_cast<std::size_t>(s)];
    switch (d.kind) {
      case PolicyDecision::Kind::kDiscard:
        if (min_before < sigma) return true;
        break;
      case PolicyDecision::Kind::kClaim:
        break;
      case PolicyDecision::Kind::kAdvance: {
        const double next_min = std::min(min_before, sigma);
        const MspAction& act =
            m.state(s).actions[static_cast<std::size_t>(d.action)];
        for (const Transition& t : act.transitions) {
          stack.push_back({t.target, next_min});
        }
        break;
      }
    }
  }
  return false;
}

StationaryPolicy threshold_bandit_policy(const Msp& m, double tau,
                                         bool tie_claim) {
  if (!is_bandit(m)) {
    throw ParameterError("threshold_bandit_policy: process is not a bandit");
  }
  const CappedValueTable table = compute_indices(m);
  const auto passes = [&](double level) {
    return level > tau || (tie_claim && level == tau);
  };
  StationaryPolicy pi(m.states.size());
  for (int s = 0; s < m.num_states(); ++s) {
    const MspState& st = m.state(s);
    if (st.is_sink()) {
      pi[static_cast<std::size_t>(s)] = passes(st.value)
                                            ? PolicyDecision::claim()
                                            : PolicyDecision::discard();
    } else {
      pi[static_cast<std::size_t>(s)] =
          passes(table.sigma[static_cast<std::size_t>(s)])
              ? PolicyDecision::advance(0)
              : PolicyDecision::discard();
    }
  }
  return pi;
}

namespace {

// E[kappa * 1{pi claims}] from (state, min index so far); kappa is the
// minimum index along the whole realized path, with sigma = V at sinks.
double amortized_value(const Msp& m, const StationaryPolicy& pi,
                       const CappedValueTable& table, int s, double min_before,
                       std::map<StateMinKey, double>& memo) {
  const StateMinKey key = state_min_key(s, min_before);
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  const PolicyDecision& d = pi[static_cast<std::size_t>(s)];
  double result = 0.0;
  if (d.kind == PolicyDecision::Kind::kClaim) {
    result = std::min(min_before, m.state(s).value);
  } else if (d.kind == PolicyDecision::Kind::kAdvance) {
    const double next_min =
        std::min(min_before, table.sigma[static_cast<std::size_t>(s)]);
    const MspAction& act =
        m.state(s).actions[static_cast<std::size_t>(d.action)];
    for (const Transition& t : act.transitions) {
      result += t.probability *
                amortized_value(m, pi, table, t.target, next_min, memo);
    }
  }
  memo[key] = result;
  return result;
}

}  // namespace

AmortizationSides amortization_sides(const Msp& m, const StationaryPolicy& pi) {
  if (!is_bandit(m)) {
    throw ParameterError("amortization_sides: process is not a bandit");
  }
  require_legal(m, pi);
  const CappedValueTable table = compute_indices(m);
  std::map<StateMinKey, double> memo;
  AmortizationSides sides;
  sides.performance = expected_performance(m, pi);
  sides.amortized =
      amortized_value(m, pi, table, m.start,
                      std::numeric_limits<double>::infinity(), memo);
  return sides;
}

}  // namespace cms
