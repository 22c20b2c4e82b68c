#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "cms/common.hpp"
#include "cms/distribution.hpp"

namespace cms {

// A concave piecewise-linear function on [0,1], stored as breakpoints with
// strictly increasing q-coordinates from 0 to 1 and nonincreasing segment
// slopes. Evaluation interpolates linearly; there is no extrapolation.
// Breakpoints whose adjacent slopes differ by less than kSlopeMergeTol are
// merged at construction.
class PLConcave {
 public:
  // Zero function.
  PLConcave();

  // Throws ParameterError if the points do not describe a concave function on
  // exactly [0,1] (slope increases above kTol are rejected).
  PLConcave(std::vector<double> xs, std::vector<double> ys);

  // q -> slope * q
  static PLConcave linear(double slope);

  double operator()(double q) const;

  // Right slope at q (left slope at q = 1); a valid supergradient.
  double supergradient(double q) const;

  const std::vector<double>& xs() const { return xs_; }
  const std::vector<double>& ys() const { return ys_; }
  std::size_t breakpoint_count() const { return xs_.size(); }

  double value_at_zero() const { return ys_.front(); }
  double value_at_one() const { return ys_.back(); }

 private:
  std::vector<double> xs_;
  std::vector<double> ys_;
};

// g(q) = q * E[X | X in its top q quantile]: the most value a claim budget of
// q can extract from one draw of d. Linear pieces have the distinct support
// values (descending) as slopes, with breakpoints at the cumulative
// probabilities. Requires nonnegative support.
PLConcave upper_expectation(const DiscreteDistribution& d);

// Optimal-value function of splitting a claim budget across weighted parts:
//   h(q) = max sum_k w_k f_k(q_k)  subject to  sum_k w_k q_k = q.
// Computed exactly by scaling each part's segments by its weight and
// concatenating all segments in order of decreasing slope. Weights must be
// strictly positive and sum to 1 within kTol.
PLConcave weighted_sup_convolution(
    const std::vector<std::pair<double, const PLConcave*>>& parts);

// Pointwise smallest concave function lying weakly above every input: the
// upper hull of all breakpoints of all inputs.
PLConcave concave_envelope(const std::vector<const PLConcave*>& fs);

// f - delta pointwise.
PLConcave shift(const PLConcave& f, double delta);

// Grid-based regularization: cap the value at q = b (the second grid point),
// enforce monotonicity by a running maximum over the remaining grid points,
// then take the upper hull of the grid points. The grid must be strictly
// increasing from 0 to 1 with grid[1] == b.
PLConcave iron(const std::vector<double>& grid, std::vector<double> values,
               double cap_at_b, double b);

// Indices of the upper concave hull of (xs[i], ys[i]) points, left to right.
// Points need not be sorted; duplicates in x keep the highest y.
std::vector<std::size_t> upper_hull_indices(const std::vector<double>& xs,
                                            const std::vector<double>& ys);

}  // namespace cms
