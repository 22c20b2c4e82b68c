#pragma once

#include <string>
#include <vector>

#include "cms/distribution.hpp"
#include "cms/matroid.hpp"
#include "cms/msp.hpp"

namespace cms {

// One arrival with several drawers of which at most one may ever be opened.
// The joint law of the drawer values is an explicit scenario list, so values
// within a cabinet may be arbitrarily correlated; cabinets are mutually
// independent.
struct Scenario {
  double probability = 0.0;
  std::vector<double> values;  // one per drawer
};

struct Cabinet {
  std::vector<Scenario> scenarios;

  int drawer_count() const {
    return scenarios.empty() ? 0 : static_cast<int>(scenarios.front().values.size());
  }
  DiscreteDistribution marginal(int drawer) const;
  const Scenario& sample_scenario(Rng& rng) const;
};

struct CabinetsInstance {
  std::vector<Cabinet> cabinets;
  Matroid matroid = Matroid::uniform(0, 0);
};

struct PandoraCabinet {
  std::vector<Msp> drawers;  // each a bandit
};

struct PandoraCabinetsInstance {
  std::vector<PandoraCabinet> cabinets;
  Matroid matroid = Matroid::uniform(0, 0);
};

struct CmsInstance {
  std::vector<Msp> processes;
  Matroid matroid = Matroid::uniform(0, 0);
};

struct NoiBox {
  double cost = 0.0;
  DiscreteDistribution dist;
};

struct NoiPandoraInstance {
  std::vector<NoiBox> boxes;
};

std::vector<std::string> validate_instance(const CabinetsInstance& inst);
std::vector<std::string> validate_instance(const PandoraCabinetsInstance& inst);
std::vector<std::string> validate_instance(const CmsInstance& inst);
std::vector<std::string> validate_instance(const NoiPandoraInstance& inst);

template <typename Instance>
void require_valid_instance(const Instance& inst) {
  const auto violations = validate_instance(inst);
  if (violations.empty()) return;
  std::string msg = "invalid instance:";
  for (const auto& v : violations) msg += "\n  " + v;
  throw ParameterError(msg);
}

// Each box becomes a two-drawer cabinet: drawer 0 inspects (one paid advance
// revealing a value), drawer 1 takes the box unseen at its mean value. The
// selection constraint is a rank-1 uniform matroid.
PandoraCabinetsInstance convert_noi_to_cabinets(const NoiPandoraInstance& inst);

// Smallest cost of the first advance over all drawers; +infinity when every
// drawer is a bare sink.
double min_first_advance_cost(const PandoraCabinetsInstance& inst);

// Folds each cabinet into one process: a fresh start state with one eps-cost
// action per drawer, compensated by raising sink drawers' values by eps and
// lowering non-sink drawers' first advance cost by eps. Requires
// 0 < eps < min_first_advance_cost.
CmsInstance convert_cabinets_to_cms(const PandoraCabinetsInstance& inst,
                                    double eps);

}  // namespace cms
