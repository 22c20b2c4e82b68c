#pragma once

#include <utility>
#include <vector>

#include "cms/common.hpp"
#include "cms/rng.hpp"

namespace cms {

// Finite discrete distribution over real values. Atoms are kept sorted by
// value with equal values merged; zero-probability atoms are dropped at
// construction, so every stored atom has strictly positive mass.
class DiscreteDistribution {
 public:
  struct Atom {
    double value = 0.0;
    double probability = 0.0;
  };

  // Point mass at 0.
  DiscreteDistribution() : atoms_{{0.0, 1.0}} {}

  // Throws ParameterError if probabilities are negative, values are not
  // finite, or the total mass is not 1 within kTol.
  explicit DiscreteDistribution(std::vector<Atom> atoms);

  static DiscreteDistribution point_mass(double value);

  // Law of sum_k weight_k * (draw from *parts[k]); weights must be positive
  // and sum to 1 within kTol.
  static DiscreteDistribution mixture(
      const std::vector<std::pair<double, const DiscreteDistribution*>>& parts);

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t support_size() const { return atoms_.size(); }

  double mean() const;
  double min_value() const { return atoms_.front().value; }
  double max_value() const { return atoms_.back().value; }

  // E[(X - threshold)^+]
  double expected_surplus(double threshold) const;

  // Pr[X >= t] when inclusive, else Pr[X > t].
  double tail_probability(double t, bool inclusive) const;

  // Law of min(X, cap).
  DiscreteDistribution capped(double cap) const;

  double sample(Rng& rng) const;

 private:
  std::vector<Atom> atoms_;
};

}  // namespace cms
