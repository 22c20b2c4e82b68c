#pragma once

#include "cms/indices.hpp"
#include "cms/instances.hpp"
#include "cms/msp.hpp"

namespace cms {

// Single-agent utility problem on a cabinet: which drawer to open against a
// posted price tau, claiming when the revealed value reaches tau.
struct CabinetSaup {
  int drawer = 0;
  double value = 0.0;  // E[(X_drawer - tau)^+]
};

// Picks the drawer maximizing E[(X^j - tau)^+] over the marginals (ties to
// the lowest index).
CabinetSaup solve_cabinet_saup(const Cabinet& cab, double tau);

// Optimal stationary policy for E[Perf - tau * 1{claim}] on an MSP, built by
// backward induction. Sinks claim iff V >= tau. At a non-sink each action is
// scored by upsilon(a) = E[(K_a - tau)^+] - C(a, s), where K_a mixes the
// successors' capped-value laws under the policy built so far; the state
// halts when every score is nonpositive, else takes the best action (ties to
// the lowest index). The table holds sigma and the kappa law per state
// relative to the chosen policy (halting states carry a point mass at 0).
struct SaupSolution {
  StationaryPolicy policy;
  double value = 0.0;  // E[(kappa_start - tau)^+]
  CappedValueTable table;
};

SaupSolution solve_saup(const Msp& m, double tau,
                        int support_cap = kDefaultSupportCap);

// Independent oracle: optimal E[Perf - tau * 1{claim}] over all
// history-dependent policies, by plain value recursion on the tree unfolding.
// On a tree the per-node choices decouple, so this equals the exhaustive
// maximum over deterministic policies.
double brute_force_saup(const Msp& m, double tau,
                        int node_budget = kDefaultTreeNodeBudget);

}  // namespace cms
