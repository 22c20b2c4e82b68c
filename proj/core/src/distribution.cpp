#include "cms/distribution.hpp"

#include <algorithm>
#include <cmath>

namespace cms {

DiscreteDistribution::DiscreteDistribution(std::vector<Atom> atoms) {
  double total = 0.0;
  for (const Atom& a : atoms) {
    if (!std::isfinite(a.value)) {
      throw ParameterError("distribution: support value is not finite");
    }
    if (a.probability < 0.0 || !std::isfinite(a.probability)) {
      throw ParameterError("distribution: negative or non-finite probability");
    }
    total += a.probability;
  }
  if (std::abs(total - 1.0) > kTol) {
    throw ParameterError("distribution: probabilities sum to " +
                         std::to_string(total) + ", expected 1");
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.value < b.value; });
  for (const Atom& a : atoms) {
    if (a.probability == 0.0) continue;
    if (!atoms_.empty() && atoms_.back().value == a.value) {
      atoms_.back().probability += a.probability;
    } else {
      atoms_.push_back(a);
    }
  }
  if (atoms_.empty()) {
    throw ParameterError("distribution: empty support");
  }
}

DiscreteDistribution DiscreteDistribution::point_mass(double value) {
  return DiscreteDistribution({{value, 1.0}});
}

DiscreteDistribution DiscreteDistribution::mixture(
    const std::vector<std::pair<double, const DiscreteDistribution*>>& parts) {
  std::vector<Atom> atoms;
  for (const auto& [weight, dist] : parts) {
    if (weight <= 0.0) {
      throw ParameterError("mixture: weights must be strictly positive");
    }
    for (const Atom& a : dist->atoms()) {
      atoms.push_back({a.value, weight * a.probability});
    }
  }
  return DiscreteDistribution(std::move(atoms));
}

double DiscreteDistribution::mean() const {
  double m = 0.0;
  for (const Atom& a : atoms_) m += a.value * a.probability;
  return m;
}

double DiscreteDistribution::expected_surplus(double threshold) const {
  double s = 0.0;
  for (auto it = atoms_.rbegin(); it != atoms_.rend(); ++it) {
    if (it->value <= threshold) break;
    s += (it->value - threshold) * it->probability;
  }
  return s;
}

double DiscreteDistribution::tail_probability(double t, bool inclusive) const {
  double p = 0.0;
  for (auto it = atoms_.rbegin(); it != atoms_.rend(); ++it) {
    if (inclusive ? it->value < t : it->value <= t) break;
    p += it->probability;
  }
  return p;
}

DiscreteDistribution DiscreteDistribution::capped(double cap) const {
  std::vector<Atom> atoms;
  double mass_at_cap = 0.0;
  for (const Atom& a : atoms_) {
    if (a.value < cap) {
      atoms.push_back(a);
    } else {
      mass_at_cap += a.probability;
    }
  }
  if (mass_at_cap > 0.0) atoms.push_back({cap, mass_at_cap});
  return DiscreteDistribution(std::move(atoms));
}

double DiscreteDistribution::sample(Rng& rng) const {
  const double u = rng.uniform01();
  double cum = 0.0;
  for (const Atom& a : atoms_) {
    cum += a.probability;
    if (u < cum) return a.value;
  }
  return atoms_.back().value;
}

}  // namespace cms
