#include "cms/instances.hpp"

#include <cmath>
#include <limits>

namespace cms {

DiscreteDistribution Cabinet::marginal(int drawer) const {
  std::vector<DiscreteDistribution::Atom> atoms;
  atoms.reserve(scenarios.size());
  for (const Scenario& sc : scenarios) {
    atoms.push_back({sc.values[static_cast<std::size_t>(drawer)], sc.probability});
  }
  return DiscreteDistribution(std::move(atoms));
}

const Scenario& Cabinet::sample_scenario(Rng& rng) const {
  const double u = rng.uniform01();
  double cum = 0.0;
  for (const Scenario& sc : scenarios) {
    cum += sc.probability;
    if (u < cum) return sc;
  }
  return scenarios.back();
}

namespace {

void check_matroid_size(const Matroid& m, std::size_t arrivals,
                        std::vector<std::string>& violations) {
  if (m.ground_size() != static_cast<int>(arrivals)) {
    violations.push_back("matroid ground size " +
                         std::to_string(m.ground_size()) + " does not match " +
                         std::to_string(arrivals) + " arrivals");
  }
}

}  // namespace

std::vector<std::string> validate_instance(const CabinetsInstance& inst) {
  std::vector<std::string> violations;
  check_matroid_size(inst.matroid, inst.cabinets.size(), violations);
  for (std::size_t i = 0; i < inst.cabinets.size(); ++i) {
    const Cabinet& cab = inst.cabinets[i];
    const std::string where = "cabinet " + std::to_string(i);
    if (cab.scenarios.empty()) {
      violations.push_back(where + ": no scenarios");
      continue;
    }
    if (cab.drawer_count() < 1) {
      violations.push_back(where + ": needs at least one drawer");
    }
    double total = 0.0;
    for (const Scenario& sc : cab.scenarios) {
      if (sc.values.size() != static_cast<std::size_t>(cab.drawer_count())) {
        violations.push_back(where + ": ragged scenario value lists");
      }
      if (sc.probability <= 0.0) {
        violations.push_back(where + ": scenario probability must be positive");
      }
      for (double v : sc.values) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
          violations.push_back(where + ": drawer values must be nonnegative");
          break;
        }
      }
      total += sc.probability;
    }
    if (std::abs(total - 1.0) > kTol) {
      violations.push_back(where + ": scenario probabilities sum to " +
                           std::to_string(total) + ", expected 1");
    }
  }
  return violations;
}

std::vector<std::string> validate_instance(const PandoraCabinetsInstance& inst) {
  std::vector<std::string> violations;
  check_matroid_size(inst.matroid, inst.cabinets.size(), violations);
  for (std::size_t i = 0; i < inst.cabinets.size(); ++i) {
    const PandoraCabinet& cab = inst.cabinets[i];
    if (cab.drawers.empty()) {
      violations.push_back("cabinet " + std::to_string(i) + ": no drawers");
    }
    for (std::size_t j = 0; j < cab.drawers.size(); ++j) {
      const std::string where =
          "cabinet " + std::to_string(i) + " drawer " + std::to_string(j);
      for (const auto& v : validate_msp(cab.drawers[j])) {
        violations.push_back(where + ": " + v);
      }
      if (!is_bandit(cab.drawers[j])) {
        violations.push_back(where + ": drawer process must be a bandit");
      }
    }
  }
  return violations;
}

std::vector<std::string> validate_instance(const CmsInstance& inst) {
  std::vector<std::string> violations;
  check_matroid_size(inst.matroid, inst.processes.size(), violations);
  for (std::size_t i = 0; i < inst.processes.size(); ++i) {
    for (const auto& v : validate_msp(inst.processes[i])) {
      violations.push_back("process " + std::to_string(i) + ": " + v);
    }
  }
  return violations;
}

std::vector<std::string> validate_instance(const NoiPandoraInstance& inst) {
  std::vector<std::string> violations;
  for (std::size_t i = 0; i < inst.boxes.size(); ++i) {
    const NoiBox& box = inst.boxes[i];
    if (!(box.cost > 0.0)) {
      violations.push_back("box " + std::to_string(i) +
                           ": inspection cost must be strictly positive");
    }
    if (box.dist.min_value() < 0.0) {
      violations.push_back("box " + std::to_string(i) +
                           ": values must be nonnegative");
    }
  }
  return violations;
}

PandoraCabinetsInstance convert_noi_to_cabinets(const NoiPandoraInstance& inst) {
  require_valid_instance(inst);
  PandoraCabinetsInstance out;
  for (const NoiBox& box : inst.boxes) {
    PandoraCabinet cab;
    // Drawer 0: pay the cost, reach one sink per support atom.
    Msp inspect;
    inspect.start = 0;
    inspect.states.emplace_back();
    MspAction open;
    open.cost = box.cost;
    for (const auto& atom : box.dist.atoms()) {
      const int sink = inspect.num_states();
      inspect.states.push_back({atom.value, {}});
      open.transitions.push_back({sink, atom.probability});
    }
    inspect.states.front().actions.push_back(std::move(open));
    cab.drawers.push_back(std::move(inspect));
    // Drawer 1: the box unseen, worth its mean.
    Msp unseen;
    unseen.start = 0;
    unseen.states.push_back({box.dist.mean(), {}});
    cab.drawers.push_back(std::move(unseen));
    out.cabinets.push_back(std::move(cab));
  }
  out.matroid = Matroid::uniform(static_cast<int>(inst.boxes.size()), 1);
  return out;
}

double min_first_advance_cost(const PandoraCabinetsInstance& inst) {
  double c_min = std::numeric_limits<double>::infinity();
  for (const PandoraCabinet& cab : inst.cabinets) {
    for (const Msp& drawer : cab.drawers) {
      const MspState& start = drawer.state(drawer.start);
      if (!start.is_sink()) {
        c_min = std::min(c_min, start.actions.front().cost);
      }
    }
  }
  return c_min;
}

CmsInstance convert_cabinets_to_cms(const PandoraCabinetsInstance& inst,
                                    double eps) {
  require_valid_instance(inst);
  const double c_min = min_first_advance_cost(inst);
  if (!(eps > 0.0) || !(eps < c_min)) {
    throw ParameterError(
        "convert_cabinets_to_cms: eps must lie strictly between 0 and the "
        "minimum first advance cost");
  }
  CmsInstance out;
  for (const PandoraCabinet& cab : inst.cabinets) {
    Msp merged;
    merged.start = 0;
    merged.states.emplace_back();
    for (const Msp& drawer : cab.drawers) {
      const int offset = merged.num_states();
      for (const MspState& st : drawer.states) {
        MspState copy = st;
        for (MspAction& act : copy.actions) {
          for (Transition& t : act.transitions) t.target += offset;
        }
        merged.states.push_back(std::move(copy));
      }
      MspState& entry =
          merged.states[static_cast<std::size_t>(offset + drawer.start)];
      if (entry.is_sink()) {
        entry.value += eps;
      } else {
        entry.actions.front().cost -= eps;
      }
      MspAction select;
      select.cost = eps;
      select.transitions.push_back({offset + drawer.start, 1.0});
      merged.states.front().actions.push_back(std::move(select));
    }
    out.processes.push_back(std::move(merged));
  }
  out.matroid = inst.matroid;
  return out;
}

}  // namespace cms
