#include "cms/saup.hpp"

#include <algorithm>

namespace cms {

CabinetSaup solve_cabinet_saup(const Cabinet& cab, double tau) {
  if (cab.scenarios.empty()) {
    throw ParameterError("solve_cabinet_saup: empty cabinet");
  }
  CabinetSaup best{0, -1.0};
  for (int j = 0; j < cab.drawer_count(); ++j) {
    double util = 0.0;
    for (const Scenario& sc : cab.scenarios) {
      const double surplus = sc.values[static_cast<std::size_t>(j)] - tau;
      if (surplus > 0.0) util += sc.probability * surplus;
    }
    if (util > best.value) best = {j, util};
  }
  return best;
}

SaupSolution solve_saup(const Msp& m, double tau, int support_cap) {
  require_valid(m);
  SaupSolution sol;
  sol.policy.assign(m.states.size(), PolicyDecision::discard());
  sol.table.sigma.assign(m.states.size(), 0.0);
  sol.table.kappa.assign(m.states.size(), DiscreteDistribution());
  const auto order = topological_order(m);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int s = *it;
    const MspState& st = m.state(s);
    if (st.is_sink()) {
      sol.policy[static_cast<std::size_t>(s)] = st.value >= tau
                                                    ? PolicyDecision::claim()
                                                    : PolicyDecision::discard();
      sol.table.sigma[static_cast<std::size_t>(s)] = st.value;
      sol.table.kappa[static_cast<std::size_t>(s)] =
          DiscreteDistribution::point_mass(st.value);
      continue;
    }
    int best_action = -1;
    double best_score = 0.0;
    DiscreteDistribution best_next;
    for (int a = 0; a < static_cast<int>(st.actions.size()); ++a) {
      const MspAction& act = st.actions[static_cast<std::size_t>(a)];
      std::vector<std::pair<double, const DiscreteDistribution*>> parts;
      parts.reserve(act.transitions.size());
      for (const Transition& t : act.transitions) {
        parts.push_back(
            {t.probability,
             &sol.table.kappa[static_cast<std::size_t>(t.target)]});
      }
      DiscreteDistribution next = DiscreteDistribution::mixture(parts);
      if (static_cast<int>(next.support_size()) > support_cap) {
        throw SizeLimitError("solve_saup: kappa support exceeds cap");
      }
      const double score = next.expected_surplus(tau) - act.cost;
      if (score > 0.0 && (best_action < 0 || score > best_score)) {
        best_action = a;
        best_score = score;
        best_next = std::move(next);
      }
    }
    if (best_action < 0) {
      // Every action scores nonpositive: halt. The continuation is worthless,
      // which the table records as a point mass at 0.
      sol.policy[static_cast<std::size_t>(s)] = PolicyDecision::discard();
      sol.table.sigma[static_cast<std::size_t>(s)] = 0.0;
      sol.table.kappa[static_cast<std::size_t>(s)] =
          DiscreteDistribution::point_mass(0.0);
      continue;
    }
    const double cost =
        st.actions[static_cast<std::size_t>(best_action)].cost;
    const double sigma = solve_weitzman_index(best_next, cost);
    sol.policy[static_cast<std::size_t>(s)] = PolicyDecision::advance(best_action);
    sol.table.sigma[static_cast<std::size_t>(s)] = sigma;
    sol.table.kappa[static_cast<std::size_t>(s)] = best_next.capped(sigma);
  }
  sol.value =
      sol.table.kappa[static_cast<std::size_t>(m.start)].expected_surplus(tau);
  // A claiming sink at the start contributes (V - tau)^+ like any other.
  return sol;
}

double brute_force_saup(const Msp& m, double tau, int node_budget) {
  const TreeMsp tree = tree_msp(m, node_budget);
  std::vector<double> val(tree.msp.states.size(), 0.0);
  // Nodes are created parent-before-child, so a reverse sweep is a valid
  // bottom-up order.
  for (std::size_t node = tree.msp.states.size(); node-- > 0;) {
    const MspState& st = tree.msp.states[node];
    if (st.is_sink()) {
      val[node] = std::max(st.value - tau, 0.0);
      continue;
    }
    double best = 0.0;  // halting is always available
    for (const MspAction& act : st.actions) {
      double v = -act.cost;
      for (const Transition& t : act.transitions) {
        v += t.probability * val[static_cast<std::size_t>(t.target)];
      }
      best = std::max(best, v);
    }
    val[node] = best;
  }
  return val[static_cast<std::size_t>(tree.msp.start)];
}

}  // namespace cms
