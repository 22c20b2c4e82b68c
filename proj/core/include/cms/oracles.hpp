#pragma once

#include "cms/instances.hpp"

namespace cms {

// Exact optimal expected welfare of an adaptive offline algorithm, by value
// recursion over the product of per-process tree unfoldings (processes are
// independent, so the product state captures the full history). The terminal
// value of a position is the best feasible claim set of the values in hand.
// The product state count must stay within budget; exceeding it is a hard
// SizeLimitError, never a truncation.
double brute_force_opt_cms(const CmsInstance& inst,
                           long long budget = kDefaultProductStateBudget);

// Same benchmark for cabinets: adaptive drawer choices and claims, expanding
// each opened drawer into its marginal support. Only marginals matter since
// at most one drawer per cabinet is ever observed.
double brute_force_opt_cabinets(const CabinetsInstance& inst,
                                long long budget = kDefaultProductStateBudget);

// Adaptive optimum when each drawer holds a bandit: the state of a cabinet is
// untouched or a (drawer, tree node) pair; opening is free and irrevocable.
double brute_force_opt_pandora_cabinets(
    const PandoraCabinetsInstance& inst,
    long long budget = kDefaultProductStateBudget);

// Sequential-search optimum with the option to take any unopened box at its
// mean value; at most one box is ever taken.
double brute_force_opt_noi(const NoiPandoraInstance& inst,
                           long long budget = kDefaultProductStateBudget);

// True iff the relaxation value dominates the exact adaptive optimum up to
// kTol. A failure indicates an implementation bug by contract.
bool exante_upper_check(double exante_objective, double brute_force_opt);

}  // namespace cms
