#pragma once

#include <vector>

#include "cms/distribution.hpp"
#include "cms/msp.hpp"

namespace cms {

// Per-state Weitzman index sigma_s and the law of the capped value kappa_s
// for a bandit process. At a sink, sigma = kappa = V(s). At a non-sink,
// sigma_s is the unique root of E[(K - sigma)^+] = C(s) where K is the capped
// value of the next state, and kappa_s = min(sigma_s, K).
struct CappedValueTable {
  std::vector<double> sigma;
  std::vector<DiscreteDistribution> kappa;
};

// Unique root of E[(K - sigma)^+] = cost. Below the minimum support point the
// surplus is linear with slope -1, so the root exists (and may be negative)
// for every cost > 0.
double solve_weitzman_index(const DiscreteDistribution& next_capped,
                            double cost);

// Backward induction over the bandit's DAG. kappa laws are exact discrete
// distributions; exceeding support_cap atoms raises SizeLimitError. Throws
// ParameterError if m is not a bandit.
CappedValueTable compute_indices(const Msp& m,
                                 int support_cap = kDefaultSupportCap);

// True iff some positive-probability run of pi halts unclaimed at a state
// whose index exceeds the index of an earlier visited state (the start state
// included). Evaluated along concrete paths, so multi-path DAG states are
// judged per path.
bool is_exposed(const Msp& m, const StationaryPolicy& pi);

// Advance while sigma is above tau, claim sinks whose value is above tau.
// tie_claim selects ">=" (true) versus ">" (false) at exact ties. The result
// is non-exposed and claims exactly when the capped value passes tau.
StationaryPolicy threshold_bandit_policy(const Msp& m, double tau,
                                         bool tie_claim);

struct AmortizationSides {
  double performance;  // E[Perf]
  double amortized;    // E[kappa * 1{pi claims}]
};

// Both sides of the amortization inequality E[Perf] <= E[kappa * 1{claims}],
// each computed exactly; equality holds exactly for non-exposed policies.
AmortizationSides amortization_sides(const Msp& m, const StationaryPolicy& pi);

}  // namespace cms
