#include "cms/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "cms/matroid.hpp"
#include "cms/msp.hpp"

namespace cms {

namespace {

// Mixed-radix addressing for product state spaces, with a hard budget.
struct ProductSpace {
  std::vector<long long> radix;
  std::vector<long long> stride;
  long long total = 1;

  explicit ProductSpace(std::vector<long long> sizes, long long budget)
      : radix(std::move(sizes)) {
    stride.resize(radix.size());
    for (std::size_t i = 0; i < radix.size(); ++i) {
      stride[i] = total;
      if (radix[i] <= 0) throw ParameterError("oracle: empty component");
      if (total > budget / radix[i]) {
        throw SizeLimitError("oracle: product state space exceeds budget");
      }
      total *= radix[i];
    }
  }

  long long index(const std::vector<long long>& digits) const {
    long long idx = 0;
    for (std::size_t i = 0; i < digits.size(); ++i) idx += digits[i] * stride[i];
    return idx;
  }
};

double best_claim(const Matroid& matroid, const std::vector<double>& weights) {
  double total = 0.0;
  for (int e : max_weight_independent(matroid, weights)) {
    total += weights[static_cast<std::size_t>(e)];
  }
  return total;
}

}  // namespace

double brute_force_opt_cms(const CmsInstance& inst, long long budget) {
  require_valid_instance(inst);
  const std::size_t n = inst.processes.size();
  std::vector<TreeMsp> trees;
  trees.reserve(n);
  std::vector<long long> sizes;
  for (const Msp& proc : inst.processes) {
    trees.push_back(tree_msp(proc));
    sizes.push_back(trees.back().msp.num_states());
  }
  const ProductSpace space(std::move(sizes), budget);
  std::vector<double> memo(static_cast<std::size_t>(space.total));
  std::vector<char> done(static_cast<std::size_t>(space.total), 0);

  std::vector<long long> digits(n);
  for (std::size_t i = 0; i < n; ++i) {
    digits[i] = trees[i].msp.start;
  }

  // Recursive evaluation; depth is bounded by total advances, which is at
  // most the sum of tree depths.
  std::vector<double> weights(n, 0.0);
  const auto value = [&](auto&& self, std::vector<long long>& pos) -> double {
    const long long idx = space.index(pos);
    if (done[static_cast<std::size_t>(idx)]) {
      return memo[static_cast<std::size_t>(idx)];
    }
    for (std::size_t i = 0; i < n; ++i) {
      weights[i] = trees[i].msp.state(static_cast<int>(pos[i])).value;
    }
    double best = best_claim(inst.matroid, weights);
    for (std::size_t i = 0; i < n; ++i) {
      const MspState& st = trees[i].msp.state(static_cast<int>(pos[i]));
      const long long saved = pos[i];
      for (const MspAction& act : st.actions) {
        double v = -act.cost;
        for (const Transition& t : act.transitions) {
          pos[i] = t.target;
          v += t.probability * self(self, pos);
        }
        pos[i] = saved;
        best = std::max(best, v);
      }
    }
    done[static_cast<std::size_t>(idx)] = 1;
    memo[static_cast<std::size_t>(idx)] = best;
    return best;
  };
  return value(value, digits);
}

double brute_force_opt_cabinets(const CabinetsInstance& inst, long long budget) {
  require_valid_instance(inst);
  const std::size_t n = inst.cabinets.size();
  // Per-cabinet positions: 0 = untouched, then one slot per (drawer, atom).
  std::vector<std::vector<DiscreteDistribution>> marginals(n);
  std::vector<std::vector<long long>> slot_base(n);
  std::vector<long long> sizes;
  for (std::size_t i = 0; i < n; ++i) {
    long long slots = 1;
    for (int j = 0; j < inst.cabinets[i].drawer_count(); ++j) {
      marginals[i].push_back(inst.cabinets[i].marginal(j));
      slot_base[i].push_back(slots);
      slots += static_cast<long long>(marginals[i].back().support_size());
    }
    sizes.push_back(slots);
  }
  const ProductSpace space(std::move(sizes), budget);
  std::vector<double> memo(static_cast<std::size_t>(space.total));
  std::vector<char> done(static_cast<std::size_t>(space.total), 0);

  std::vector<double> weights(n, 0.0);
  const auto observed = [&](std::size_t i, long long pos) {
    // Value revealed at an opened slot.
    for (std::size_t j = marginals[i].size(); j-- > 0;) {
      if (pos >= slot_base[i][j]) {
        return marginals[i][j]
            .atoms()[static_cast<std::size_t>(pos - slot_base[i][j])]
            .value;
      }
    }
    return 0.0;
  };

  const auto value = [&](auto&& self, std::vector<long long>& pos) -> double {
    const long long idx = space.index(pos);
    if (done[static_cast<std::size_t>(idx)]) {
      return memo[static_cast<std::size_t>(idx)];
    }
    for (std::size_t i = 0; i < n; ++i) {
      weights[i] = pos[i] == 0 ? 0.0 : observed(i, pos[i]);
    }
    double best = best_claim(inst.matroid, weights);
    for (std::size_t i = 0; i < n; ++i) {
      if (pos[i] != 0) continue;  // one drawer per cabinet, ever
      for (std::size_t j = 0; j < marginals[i].size(); ++j) {
        double v = 0.0;
        const auto& atoms = marginals[i][j].atoms();
        for (std::size_t a = 0; a < atoms.size(); ++a) {
          pos[i] = slot_base[i][j] + static_cast<long long>(a);
          v += atoms[a].probability * self(self, pos);
        }
        pos[i] = 0;
        best = std::max(best, v);
      }
    }
    done[static_cast<std::size_t>(idx)] = 1;
    memo[static_cast<std::size_t>(idx)] = best;
    return best;
  };
  std::vector<long long> digits(n, 0);
  return value(value, digits);
}

double brute_force_opt_pandora_cabinets(const PandoraCabinetsInstance& inst,
                                        long long budget) {
  require_valid_instance(inst);
  const std::size_t n = inst.cabinets.size();
  std::vector<std::vector<TreeMsp>> trees(n);
  std::vector<std::vector<long long>> slot_base(n);
  std::vector<long long> sizes;
  for (std::size_t i = 0; i < n; ++i) {
    long long slots = 1;  // 0 = untouched
    for (const Msp& drawer : inst.cabinets[i].drawers) {
      trees[i].push_back(tree_msp(drawer));
      slot_base[i].push_back(slots);
      slots += trees[i].back().msp.num_states();
    }
    sizes.push_back(slots);
  }
  const ProductSpace space(std::move(sizes), budget);
  std::vector<double> memo(static_cast<std::size_t>(space.total));
  std::vector<char> done(static_cast<std::size_t>(space.total), 0);

  const auto locate = [&](std::size_t i, long long pos) {
    for (std::size_t j = trees[i].size(); j-- > 0;) {
      if (pos >= slot_base[i][j]) {
        return std::pair<std::size_t, int>(
            j, static_cast<int>(pos - slot_base[i][j]));
      }
    }
    return std::pair<std::size_t, int>(0, -1);
  };

  std::vector<double> weights(n, 0.0);
  const auto value = [&](auto&& self, std::vector<long long>& pos) -> double {
    const long long idx = space.index(pos);
    if (done[static_cast<std::size_t>(idx)]) {
      return memo[static_cast<std::size_t>(idx)];
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (pos[i] == 0) {
        weights[i] = 0.0;
      } else {
        const auto [j, node] = locate(i, pos[i]);
        weights[i] = trees[i][j].msp.state(node).value;
      }
    }
    double best = best_claim(inst.matroid, weights);
    for (std::size_t i = 0; i < n; ++i) {
      const long long saved = pos[i];
      if (pos[i] == 0) {
        // Opening a drawer is free and reveals nothing by itself.
        for (std::size_t j = 0; j < trees[i].size(); ++j) {
          pos[i] = slot_base[i][j] + trees[i][j].msp.start;
          best = std::max(best, self(self, pos));
        }
        pos[i] = saved;
        continue;
      }
      const auto [j, node] = locate(i, pos[i]);
      const MspState& st = trees[i][j].msp.state(node);
      for (const MspAction& act : st.actions) {
        double v = -act.cost;
        for (const Transition& t : act.transitions) {
          pos[i] = slot_base[i][j] + t.target;
          v += t.probability * self(self, pos);
        }
        pos[i] = saved;
        best = std::max(best, v);
      }
    }
    done[static_cast<std::size_t>(idx)] = 1;
    memo[static_cast<std::size_t>(idx)] = best;
    return best;
  };
  std::vector<long long> digits(n, 0);
  return value(value, digits);
}

double brute_force_opt_noi(const NoiPandoraInstance& inst, long long budget) {
  require_valid_instance(inst);
  const std::size_t n = inst.boxes.size();
  std::vector<long long> sizes;
  for (const NoiBox& box : inst.boxes) {
    sizes.push_back(1 + static_cast<long long>(box.dist.support_size()));
  }
  const ProductSpace space(std::move(sizes), budget);
  std::vector<double> memo(static_cast<std::size_t>(space.total));
  std::vector<char> done(static_cast<std::size_t>(space.total), 0);

  const auto value = [&](auto&& self, std::vector<long long>& pos) -> double {
    const long long idx = space.index(pos);
    if (done[static_cast<std::size_t>(idx)]) {
      return memo[static_cast<std::size_t>(idx)];
    }
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const NoiBox& box = inst.boxes[i];
      if (pos[i] != 0) {
        // Opened: its value can be selected (one selection total).
        best = std::max(
            best, box.dist.atoms()[static_cast<std::size_t>(pos[i] - 1)].value);
        continue;
      }
      // Take it unseen and stop, or pay to inspect.
      best = std::max(best, box.dist.mean());
      double v = -box.cost;
      const auto& atoms = box.dist.atoms();
      for (std::size_t a = 0; a < atoms.size(); ++a) {
        pos[i] = static_cast<long long>(a) + 1;
        v += atoms[a].probability * self(self, pos);
      }
      pos[i] = 0;
      best = std::max(best, v);
    }
    done[static_cast<std::size_t>(idx)] = 1;
    memo[static_cast<std::size_t>(idx)] = best;
    return best;
  };
  std::vector<long long> digits(n, 0);
  return value(value, digits);
}

bool exante_upper_check(double exante_objective, double brute_force_opt) {
  return exante_objective >= brute_force_opt - kTol;
}

}  // namespace cms
