#include "cms/prophet.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "cms/indices.hpp"

namespace cms {

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

std::uint32_t to_mask(const std::vector<int>& s) {
  std::uint32_t mask = 0;
  for (int e : s) mask |= 1u << e;
  return mask;
}

}  // namespace

ThresholdEngine::ThresholdEngine(const Matroid& matroid, FractionalPoint q,
                                 std::vector<double> z, ThresholdSpec spec)
    : matroid_(matroid), q_(std::move(q)), z_(std::move(z)), spec_(spec) {
  if (static_cast<int>(q_.q.size()) != matroid_.ground_size() ||
      z_.size() != q_.q.size()) {
    throw ParameterError("threshold engine: dimension mismatch");
  }
  for (double v : z_) {
    if (v < 0.0) throw ParameterError("threshold engine: negative rate");
  }
  if (spec_.mode == ThresholdMode::kExact) {
    std::vector<std::pair<double, std::vector<int>>> dq = exact_dq(matroid_, q_);
    decomposition_.reserve(dq.size());
    for (const auto& [p, set] : dq) {
      decomposition_.push_back({p, to_mask(set)});
    }
  } else {
    if (spec_.samples < 1) {
      throw ParameterError("threshold engine: need at least one sample");
    }
    sampler_.emplace(matroid_, q_);
  }
}

double ThresholdEngine::threshold(int arrival, std::uint32_t selected,
                                  Rng& rng) const {
  const auto gap = [&](std::uint32_t support) {
    std::vector<double> weights(z_.size(), 0.0);
    for (std::size_t e = 0; e < z_.size(); ++e) {
      if (support & (1u << e)) weights[e] = z_[e];
    }
    return remaining_value_mask(matroid_, weights, support, selected) -
           remaining_value_mask(matroid_, weights, support,
                                selected | (1u << arrival));
  };
  if (spec_.mode == ThresholdMode::kExact) {
    const std::pair<int, std::uint32_t> key{arrival, selected};
    {
      std::lock_guard<std::mutex> lock(cache_mutex_);
      if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    }
    double total = 0.0;
    for (const auto& [p, support] : decomposition_) total += p * gap(support);
    const double t = 0.5 * total;
    std::lock_guard<std::mutex> lock(cache_mutex_);
    cache_[key] = t;
    return t;
  }
  double total = 0.0;
  for (int k = 0; k < spec_.samples; ++k) {
    total += gap(to_mask(sampler_->sample(rng.next())));
  }
  return 0.5 * total / spec_.samples;
}

namespace {

RunRecord run_cabinets_with_engine(const CabinetsInstance& inst,
                                   const ThresholdEngine& engine,
                                   std::uint64_t seed) {
  RunRecord record;
  record.seed = seed;
  Rng rng(seed);
  std::uint32_t selected = 0;
  for (std::size_t i = 0; i < inst.cabinets.size(); ++i) {
    ArrivalRecord arrival;
    if (!inst.matroid.independent_mask(selected | (1u << i))) {
      arrival.threshold = kInfinity;
      record.arrivals.push_back(arrival);
      continue;
    }
    arrival.threshold = engine.threshold(static_cast<int>(i), selected, rng);
    const CabinetSaup choice =
        solve_cabinet_saup(inst.cabinets[i], arrival.threshold);
    arrival.drawer = choice.drawer;
    const Scenario& sc = inst.cabinets[i].sample_scenario(rng);
    const double x = sc.values[static_cast<std::size_t>(choice.drawer)];
    if (x >= arrival.threshold) {
      arrival.claimed = true;
      arrival.contribution = x;
      selected |= 1u << i;
      record.selected.push_back(static_cast<int>(i));
    }
    record.welfare += arrival.contribution;
    record.arrivals.push_back(arrival);
  }
  return record;
}

}  // namespace

RunRecord run_cabinets_prophet(const CabinetsInstance& inst,
                               const ThresholdEngine& engine,
                               std::uint64_t seed) {
  require_valid_instance(inst);
  return run_cabinets_with_engine(inst, engine, seed);
}

RunRecord run_cabinets_prophet(const CabinetsInstance& inst,
                               const FractionalPoint& q,
                               const std::vector<double>& z, ThresholdSpec spec,
                               std::uint64_t seed) {
  require_valid_instance(inst);
  ThresholdEngine engine(inst.matroid, q, z, spec);
  return run_cabinets_with_engine(inst, engine, seed);
}

RunRecord run_classic_reduction(const CabinetsInstance& inst,
                                const std::vector<std::vector<double>>& lambdas,
                                const ClassicThresholdRule& rule,
                                std::uint64_t seed) {
  require_valid_instance(inst);
  if (lambdas.size() != inst.cabinets.size()) {
    throw ParameterError("run_classic_reduction: one drawer law per cabinet");
  }
  RunRecord record;
  record.seed = seed;
  Rng rng(seed);
  for (std::size_t i = 0; i < inst.cabinets.size(); ++i) {
    const auto& law = lambdas[i];
    if (law.size() != static_cast<std::size_t>(inst.cabinets[i].drawer_count())) {
      throw ParameterError("run_classic_reduction: drawer law size mismatch");
    }
    double total = 0.0;
    for (double p : law) {
      if (p < 0.0) throw ParameterError("run_classic_reduction: negative weight");
      total += p;
    }
    if (std::abs(total - 1.0) > kTol) {
      throw ParameterError("run_classic_reduction: drawer law must sum to 1");
    }
    ArrivalRecord arrival;
    if (!inst.matroid.independent(
            [&] {
              auto s = record.selected;
              s.push_back(static_cast<int>(i));
              return s;
            }())) {
      arrival.threshold = kInfinity;
      record.arrivals.push_back(arrival);
      continue;
    }
    // Draw the prescribed drawer, then the cabinet realization.
    const double u = rng.uniform01();
    double cum = 0.0;
    int drawer = static_cast<int>(law.size()) - 1;
    for (std::size_t j = 0; j < law.size(); ++j) {
      cum += law[j];
      if (u < cum) {
        drawer = static_cast<int>(j);
        break;
      }
    }
    arrival.drawer = drawer;
    arrival.threshold = rule(static_cast<int>(i), record.selected);
    const Scenario& sc = inst.cabinets[i].sample_scenario(rng);
    const double x = sc.values[static_cast<std::size_t>(drawer)];
    if (x >= arrival.threshold) {
      arrival.claimed = true;
      arrival.contribution = x;
      record.selected.push_back(static_cast<int>(i));
    }
    record.welfare += arrival.contribution;
    record.arrivals.push_back(arrival);
  }
  return record;
}

RunRecord run_pandora_prophet(const PandoraCabinetsInstance& inst,
                              const FractionalPoint& q,
                              const std::vector<double>& z, ThresholdSpec spec,
                              std::uint64_t seed, double tie_claim_prob) {
  require_valid_instance(inst);
  if (tie_claim_prob < 0.0 || tie_claim_prob > 1.0) {
    throw ParameterError("run_pandora_prophet: tie probability outside [0,1]");
  }
  ThresholdEngine engine(inst.matroid, q, z, spec);
  // Index tables per drawer are threshold-independent.
  std::vector<std::vector<CappedValueTable>> tables(inst.cabinets.size());
  for (std::size_t i = 0; i < inst.cabinets.size(); ++i) {
    for (const Msp& drawer : inst.cabinets[i].drawers) {
      tables[i].push_back(compute_indices(drawer));
    }
  }
  RunRecord record;
  record.seed = seed;
  Rng rng(seed);
  std::uint32_t selected = 0;
  for (std::size_t i = 0; i < inst.cabinets.size(); ++i) {
    ArrivalRecord arrival;
    if (!inst.matroid.independent_mask(selected | (1u << i))) {
      arrival.threshold = kInfinity;
      record.arrivals.push_back(arrival);
      continue;
    }
    const double t = engine.threshold(static_cast<int>(i), selected, rng);
    arrival.threshold = t;
    const bool tie_claim =
        tie_claim_prob >= 1.0 ||
        (tie_claim_prob > 0.0 && rng.uniform01() < tie_claim_prob);
    // Drawer with the best expected surplus of its capped value over t.
    int best_drawer = 0;
    double best_surplus = -1.0;
    for (std::size_t j = 0; j < tables[i].size(); ++j) {
      const Msp& drawer = inst.cabinets[i].drawers[j];
      const double surplus =
          tables[i][j].kappa[static_cast<std::size_t>(drawer.start)]
              .expected_surplus(t);
      if (surplus > best_surplus) {
        best_surplus = surplus;
        best_drawer = static_cast<int>(j);
      }
    }
    arrival.drawer = best_drawer;
    // Advance while the index passes the threshold; claim sinks that do.
    const Msp& drawer = inst.cabinets[i].drawers[static_cast<std::size_t>(best_drawer)];
    const CappedValueTable& table = tables[i][static_cast<std::size_t>(best_drawer)];
    const auto passes = [&](double level) {
      return level > t || (tie_claim && level == t);
    };
    int s = drawer.start;
    double contribution = 0.0;
    for (;;) {
      const MspState& st = drawer.state(s);
      if (st.is_sink()) {
        if (passes(st.value)) {
          arrival.claimed = true;
          contribution += st.value;
        }
        break;
      }
      if (!passes(table.sigma[static_cast<std::size_t>(s)])) break;
      const MspAction& act = st.actions.front();
      contribution -= act.cost;
      const double u = rng.uniform01();
      double cum = 0.0;
      int next = act.transitions.back().target;
      for (const Transition& tr : act.transitions) {
        cum += tr.probability;
        if (u < cum) {
          next = tr.target;
          break;
        }
      }
      s = next;
    }
    arrival.contribution = contribution;
    if (arrival.claimed) {
      selected |= 1u << i;
      record.selected.push_back(static_cast<int>(i));
    }
    record.welfare += contribution;
    record.arrivals.push_back(arrival);
  }
  return record;
}

CmsProphetPlan::CmsProphetPlan(const CmsInstance& inst, double eps,
                               bool use_exact_curves, ThresholdSpec spec)
    : inst_(inst) {
  require_valid_instance(inst);
  if (!(eps > 0.0) || eps >= 1.0) {
    throw ParameterError("CmsProphetPlan: eps must lie in (0,1)");
  }
  const double eps_prime = eps / 4.0;
  // Best single-process welfare with a free claim lower-bounds the optimum
  // and anchors the approximation scales.
  double w_bar = 0.0;
  for (const Msp& proc : inst.processes) {
    w_bar = std::max(w_bar, solve_saup(proc, 0.0).value);
  }
  const std::size_t n = inst.processes.size();
  if (w_bar <= 0.0) {
    // Nothing is worth claiming anywhere.
    exante_.q.q.assign(n, 0.0);
    exante_.curves.assign(n, PLConcave());
    exante_.z.assign(n, 0.0);
    q_prime_.q.assign(n, 0.0);
    zhat_.assign(n, 0.0);
    engine_.emplace(inst.matroid, q_prime_, zhat_, spec);
    return;
  }
  const double c_curve = eps_prime * w_bar;
  exante_ = solve_exante_cms(
      inst, use_exact_curves
                ? std::optional<FptasParams>{}
                : std::optional<FptasParams>{{c_curve, eps_prime}});

  double min_q = kInfinity;
  for (double v : exante_.q.q) {
    if (v > 0.0) min_q = std::min(min_q, v);
  }
  q_prime_.q.assign(n, 0.0);
  zhat_.assign(n, 0.0);
  if (std::isfinite(min_q)) {
    const double c =
        eps_prime * eps_prime * w_bar * min_q / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double qi = exante_.q.q[i];
      if (qi <= 0.0) continue;
      const double fhat = exante_.curves[i](qi);
      if (fhat <= 8.0 * c / eps_prime) continue;  // drop negligible arrivals
      zhat_[i] = fhat / (qi * (1.0 + eps_prime)) - c / qi;
      q_prime_.q[i] = qi;
    }
  }
  engine_.emplace(inst.matroid, q_prime_, zhat_, spec);
}

RunRecord CmsProphetPlan::run(std::uint64_t seed) const {
  RunRecord record;
  record.seed = seed;
  Rng rng(seed);
  std::uint32_t selected = 0;
  for (std::size_t i = 0; i < inst_.processes.size(); ++i) {
    ArrivalRecord arrival;
    // Arrivals cut out of the plan are discarded without interaction.
    if (q_prime_.q[i] <= 0.0 ||
        !inst_.matroid.independent_mask(selected | (1u << i))) {
      arrival.threshold = kInfinity;
      record.arrivals.push_back(arrival);
      continue;
    }
    const double t = engine_->threshold(static_cast<int>(i), selected, rng);
    arrival.threshold = t;
    // SAUP policy for this arrival and threshold, cached across trials.
    std::shared_ptr<const SaupSolution> solution;
    {
      std::uint64_t t_bits;
      static_assert(sizeof(t_bits) == sizeof(t));
      std::memcpy(&t_bits, &t, sizeof(t_bits));
      const std::pair<int, std::uint64_t> key{static_cast<int>(i), t_bits};
      std::lock_guard<std::mutex> lock(cache_mutex_);
      auto it = saup_cache_.find(key);
      if (it == saup_cache_.end()) {
        it = saup_cache_
                 .emplace(key, std::make_shared<SaupSolution>(
                                   solve_saup(inst_.processes[i], t)))
                 .first;
      }
      solution = it->second;
    }
    const SimulationResult sim =
        simulate_policy(inst_.processes[i], solution->policy, rng.next());
    arrival.contribution = sim.performance;
    arrival.claimed = sim.transcript.terminal == Terminal::kClaimed;
    if (arrival.claimed) {
      selected |= 1u << i;
      record.selected.push_back(static_cast<int>(i));
    }
    record.welfare += arrival.contribution;
    record.arrivals.push_back(arrival);
  }
  return record;
}

RunRecord run_cms_prophet(const CmsInstance& inst, double eps,
                          std::uint64_t seed) {
  return CmsProphetPlan(inst, eps).run(seed);
}

WelfareEstimate estimate_welfare(
    const std::function<RunRecord(std::uint64_t)>& runner, int trials,
    std::uint64_t base_seed) {
  if (trials < 2) {
    throw ParameterError("estimate_welfare: need at least two trials");
  }
  std::vector<double> welfare(static_cast<std::size_t>(trials));
  for (int t = 0; t < trials; ++t) {
    welfare[static_cast<std::size_t>(t)] =
        runner(derive_seed(base_seed, static_cast<std::uint64_t>(t))).welfare;
  }
  WelfareEstimate est;
  for (double w : welfare) est.mean += w;
  est.mean /= trials;
  double ss = 0.0;
  for (double w : welfare) ss += (w - est.mean) * (w - est.mean);
  est.std_error = std::sqrt(ss / (trials - 1)) / std::sqrt(trials);
  return est;
}

}  // namespace cms
