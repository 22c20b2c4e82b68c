#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "cms/exante.hpp"
#include "cms/instances.hpp"
#include "cms/matroid.hpp"
#include "cms/saup.hpp"

namespace cms {

struct ArrivalRecord {
  double threshold = 0.0;  // +infinity when the arrival was discarded as infeasible
  int drawer = -1;         // drawer opened / -1 for plain MSP arrivals
  bool claimed = false;
  double contribution = 0.0;  // claimed value minus costs spent on this arrival
};

struct RunRecord {
  std::vector<ArrivalRecord> arrivals;
  std::vector<int> selected;
  double welfare = 0.0;
  std::uint64_t seed = 0;
};

enum class ThresholdMode { kExact, kMonteCarlo };

struct ThresholdSpec {
  ThresholdMode mode = ThresholdMode::kExact;
  int samples = 2000;  // draws of F' per threshold in Monte Carlo mode
};

// Adaptive thresholds T_i = 1/2 E[R'(A) - R'(A u {i})], where R' scores the
// best completion of A from an independent set F' drawn from a decomposition
// of q, weighted by z restricted to F'. Exact mode averages over the full
// decomposition (memoized per (arrival, selected-set)); Monte Carlo mode
// averages seeded pipage samples. Holds a reference to the matroid, which
// must outlive the engine.
class ThresholdEngine {
 public:
  ThresholdEngine(const Matroid& matroid, FractionalPoint q,
                  std::vector<double> z, ThresholdSpec spec);

  // A u {i} must be independent. rng is only touched in Monte Carlo mode.
  double threshold(int arrival, std::uint32_t selected, Rng& rng) const;

  const std::vector<double>& z() const { return z_; }

 private:
  const Matroid& matroid_;
  FractionalPoint q_;
  std::vector<double> z_;
  ThresholdSpec spec_;
  std::vector<std::pair<double, std::uint32_t>> decomposition_;
  std::optional<PipageSampler> sampler_;
  mutable std::map<std::pair<int, std::uint32_t>, double> cache_;
  mutable std::mutex cache_mutex_;
};

// One online pass over a cabinets instance: discard infeasible arrivals,
// price the rest with ThresholdEngine, open the utility-maximizing drawer and
// claim iff the revealed value reaches the threshold.
RunRecord run_cabinets_prophet(const CabinetsInstance& inst,
                               const FractionalPoint& q,
                               const std::vector<double>& z, ThresholdSpec spec,
                               std::uint64_t seed);
RunRecord run_cabinets_prophet(const CabinetsInstance& inst,
                               const ThresholdEngine& engine,
                               std::uint64_t seed);

// Classic-prophets embedding: draw the drawer from the supplied per-cabinet
// distribution instead of optimizing it, then apply a caller-provided
// threshold rule to the observed value. Realizes any classic ex-ante prophet
// algorithm on the mixture variables.
using ClassicThresholdRule =
    std::function<double(int arrival, const std::vector<int>& selected)>;

RunRecord run_classic_reduction(const CabinetsInstance& inst,
                                const std::vector<std::vector<double>>& lambdas,
                                const ClassicThresholdRule& rule,
                                std::uint64_t seed);

// Pandora's-cabinets pass: per arrival choose the drawer maximizing
// E[(kappa - T)^+], then advance that bandit while its index passes T and
// claim per the threshold policy. tie_claim_prob is the chance that exact
// index ties advance/claim (resolved by one seeded coin per arrival).
RunRecord run_pandora_prophet(const PandoraCabinetsInstance& inst,
                              const FractionalPoint& q,
                              const std::vector<double>& z, ThresholdSpec spec,
                              std::uint64_t seed, double tie_claim_prob = 1.0);

// Precomputed state for the end-to-end online algorithm on a CMS instance:
// the ex-ante solve, the cutoff-adjusted (q', zhat), the threshold engine and
// a per-(arrival, threshold) cache of SAUP policies. Holds a reference to the
// instance, which must outlive the plan.
class CmsProphetPlan {
 public:
  // eps in (0,1). Uses grid-approximated curves by default; exact curves can
  // be forced for tiny instances.
  CmsProphetPlan(const CmsInstance& inst, double eps,
                 bool use_exact_curves = false,
                 ThresholdSpec spec = ThresholdSpec{});

  RunRecord run(std::uint64_t seed) const;

  const ExAnteSolution& exante() const { return exante_; }
  double exante_objective() const { return exante_.objective; }
  const std::vector<double>& zhat() const { return zhat_; }
  const FractionalPoint& q_prime() const { return q_prime_; }

 private:
  const CmsInstance& inst_;
  ExAnteSolution exante_;
  FractionalPoint q_prime_;
  std::vector<double> zhat_;
  std::optional<ThresholdEngine> engine_;
  mutable std::map<std::pair<int, std::uint64_t>, std::shared_ptr<const SaupSolution>>
      saup_cache_;
  mutable std::mutex cache_mutex_;
};

// Convenience wrapper that builds a fresh plan; use CmsProphetPlan directly
// for repeated trials.
RunRecord run_cms_prophet(const CmsInstance& inst, double eps,
                          std::uint64_t seed);

struct WelfareEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

// Mean and standard error of welfare over independent seeded trials
// (seeds derived from base_seed). Requires trials >= 2.
WelfareEstimate estimate_welfare(const std::function<RunRecord(std::uint64_t)>& runner,
                                 int trials, std::uint64_t base_seed);

}  // namespace cms
