#include "cms/exante.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cms {

CabinetCurve cabinet_value_curve(const Cabinet& cab) {
  if (cab.scenarios.empty()) {
    throw ParameterError("cabinet_value_curve: empty cabinet");
  }
  std::vector<PLConcave> drawer_curves;
  drawer_curves.reserve(static_cast<std::size_t>(cab.drawer_count()));
  for (int j = 0; j < cab.drawer_count(); ++j) {
    drawer_curves.push_back(upper_expectation(cab.marginal(j)));
  }
  // Tagged hull over all drawer breakpoints; lower drawer index wins shared
  // vertices so witnesses are deterministic.
  std::vector<double> xs, ys;
  std::vector<int> tag;
  for (int j = 0; j < cab.drawer_count(); ++j) {
    const auto& f = drawer_curves[static_cast<std::size_t>(j)];
    xs.insert(xs.end(), f.xs().begin(), f.xs().end());
    ys.insert(ys.end(), f.ys().begin(), f.ys().end());
    tag.insert(tag.end(), f.xs().size(), j);
  }
  const auto hull = upper_hull_indices(xs, ys);
  CabinetCurve out;
  std::vector<double> hx, hy;
  for (std::size_t idx : hull) {
    hx.push_back(xs[idx]);
    hy.push_back(ys[idx]);
    out.vertices.push_back({xs[idx], ys[idx], tag[idx]});
  }
  out.curve = PLConcave(std::move(hx), std::move(hy));
  return out;
}

DrawerMixture recover_witness(const CabinetCurve& curve, double q) {
  if (q < -1e-12 || q > 1.0 + 1e-12) {
    throw ParameterError("recover_witness: q outside [0,1]");
  }
  q = std::clamp(q, 0.0, 1.0);
  const auto& v = curve.vertices;
  DrawerMixture mix;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (std::abs(q - v[i].q) <= 1e-12) {
      mix.parts.push_back({1.0, v[i].drawer, v[i].q});
      return mix;
    }
    if (i + 1 < v.size() && q > v[i].q && q < v[i + 1].q) {
      const double lo_weight = (v[i + 1].q - q) / (v[i + 1].q - v[i].q);
      mix.parts.push_back({lo_weight, v[i].drawer, v[i].q});
      mix.parts.push_back({1.0 - lo_weight, v[i + 1].drawer, v[i + 1].q});
      return mix;
    }
  }
  throw ParameterError("recover_witness: q not bracketed by hull vertices");
}

namespace {

// g_s at a halting state and the claim budget it can absorb: claiming at a
// non-sink is worthless, so the halt option is the zero function.
const PLConcave& zero_curve() {
  static const PLConcave zero;
  return zero;
}

}  // namespace

PLConcave exact_value_curve(const Msp& m, int breakpoint_budget) {
  require_valid(m);
  std::vector<PLConcave> g(m.states.size());
  const auto order = topological_order(m);
  std::size_t total_breakpoints = 0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int s = *it;
    const MspState& st = m.state(s);
    if (st.is_sink()) {
      g[static_cast<std::size_t>(s)] =
          st.value == 0.0 ? PLConcave() : PLConcave::linear(st.value);
    } else {
      std::vector<PLConcave> shifted;
      shifted.reserve(st.actions.size());
      for (const MspAction& act : st.actions) {
        std::vector<std::pair<double, const PLConcave*>> parts;
        parts.reserve(act.transitions.size());
        for (const Transition& t : act.transitions) {
          parts.push_back(
              {t.probability, &g[static_cast<std::size_t>(t.target)]});
        }
        shifted.push_back(shift(weighted_sup_convolution(parts), act.cost));
      }
      std::vector<const PLConcave*> options = {&zero_curve()};
      for (const PLConcave& f : shifted) options.push_back(&f);
      g[static_cast<std::size_t>(s)] = concave_envelope(options);
    }
    total_breakpoints += g[static_cast<std::size_t>(s)].breakpoint_count();
    if (total_breakpoints > static_cast<std::size_t>(breakpoint_budget)) {
      throw SizeLimitError("exact_value_curve: breakpoint budget exceeded");
    }
  }
  return g[static_cast<std::size_t>(m.start)];
}

PLConcave approx_value_curve(const Msp& m, double c, double eps) {
  require_valid(m);
  if (!(c > 0.0)) throw ParameterError("approx_value_curve: c must be positive");
  if (!(eps > 0.0) || !(eps < 1.0)) {
    throw ParameterError("approx_value_curve: eps must lie in (0,1)");
  }
  double max_value = 0.0;
  for (const MspState& st : m.states) max_value = std::max(max_value, st.value);
  if (max_value == 0.0) return PLConcave();  // nothing to claim anywhere

  const double alpha = eps / (2.0 * static_cast<double>(m.num_states()));
  const double b = std::min(c / max_value, 1.0);
  std::vector<double> grid = {0.0};
  for (double theta = b; theta < 1.0; theta *= 1.0 + alpha) grid.push_back(theta);
  if (grid.back() < 1.0) grid.push_back(1.0);
  grid.back() = 1.0;
  const double cap_at_b = b * max_value;

  const auto ironed_from = [&](const PLConcave& raw) {
    std::vector<double> values(grid.size());
    for (std::size_t t = 0; t < grid.size(); ++t) values[t] = raw(grid[t]);
    return iron(grid, std::move(values), cap_at_b, b);
  };

  std::vector<PLConcave> g(m.states.size());
  const auto order = topological_order(m);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int s = *it;
    const MspState& st = m.state(s);
    if (st.is_sink()) {
      // Base level is exact.
      g[static_cast<std::size_t>(s)] =
          st.value == 0.0 ? PLConcave() : PLConcave::linear(st.value);
      continue;
    }
    std::vector<PLConcave> shifted;
    shifted.reserve(st.actions.size());
    for (const MspAction& act : st.actions) {
      std::vector<std::pair<double, const PLConcave*>> parts;
      parts.reserve(act.transitions.size());
      for (const Transition& t : act.transitions) {
        parts.push_back({t.probability, &g[static_cast<std::size_t>(t.target)]});
      }
      shifted.push_back(
          shift(ironed_from(weighted_sup_convolution(parts)), act.cost));
    }
    std::vector<const PLConcave*> options = {&zero_curve()};
    for (const PLConcave& f : shifted) options.push_back(&f);
    g[static_cast<std::size_t>(s)] = ironed_from(concave_envelope(options));
  }
  return g[static_cast<std::size_t>(m.start)];
}

FractionalPoint maximize_separable_concave(const Matroid& m,
                                           const std::vector<PLConcave>& curves,
                                           int budget) {
  const int n = m.ground_size();
  if (static_cast<int>(curves.size()) != n) {
    throw ParameterError("maximize_separable_concave: dimension mismatch");
  }
  for (const PLConcave& f : curves) {
    if (std::abs(f.value_at_zero()) > kTol) {
      throw ParameterError("maximize_separable_concave: curves must vanish at 0");
    }
  }
  const auto ranks = build_rank_table(m, budget);
  const std::size_t size = std::size_t{1} << n;
  FractionalPoint point;
  point.q.assign(static_cast<std::size_t>(n), 0.0);
  std::vector<double>& q = point.q;

  // Coordinates only ever grow, so a coordinate inside a tight rank
  // constraint stays blocked for good.
  std::vector<bool> blocked(static_cast<std::size_t>(n), false);
  constexpr double kSlopeFloor = 1e-12;
  for (;;) {
    // Steepest current slope among coordinates that can still grow.
    int best = -1;
    double best_slope = kSlopeFloor;
    for (int i = 0; i < n; ++i) {
      if (blocked[static_cast<std::size_t>(i)]) continue;
      if (q[static_cast<std::size_t>(i)] >= 1.0 - 1e-15) continue;
      const double slope =
          curves[static_cast<std::size_t>(i)].supergradient(
              q[static_cast<std::size_t>(i)]);
      if (slope > best_slope) {
        best_slope = slope;
        best = i;
      }
    }
    if (best < 0) break;
    // Advance to the next breakpoint or until a rank constraint goes tight.
    const auto& xs = curves[static_cast<std::size_t>(best)].xs();
    const double qi = q[static_cast<std::size_t>(best)];
    double step = 1.0 - qi;
    for (double x : xs) {
      if (x > qi + 1e-15) {
        step = std::min(step, x - qi);
        break;
      }
    }
    double slack = step;
    for (std::uint32_t s = 1; s < size; ++s) {
      if (!(s & (1u << best))) continue;
      double sum = 0.0;
      std::uint32_t rest = s;
      while (rest) {
        const int e = std::countr_zero(rest);
        rest &= rest - 1;
        sum += q[static_cast<std::size_t>(e)];
      }
      slack = std::min(slack, ranks[s] - sum);
    }
    if (slack <= 1e-15) {
      blocked[static_cast<std::size_t>(best)] = true;
      continue;
    }
    q[static_cast<std::size_t>(best)] += slack;
  }
  return point;
}

namespace {

std::vector<double> per_arrival_rates(const std::vector<PLConcave>& curves,
                                      const FractionalPoint& q) {
  std::vector<double> z(curves.size(), 0.0);
  for (std::size_t i = 0; i < curves.size(); ++i) {
    if (q.q[i] > 0.0) z[i] = curves[i](q.q[i]) / q.q[i];
  }
  return z;
}

}  // namespace

ExAnteSolution solve_exante_cabinets(const CabinetsInstance& inst) {
  require_valid_instance(inst);
  ExAnteSolution sol;
  std::vector<CabinetCurve> tagged;
  tagged.reserve(inst.cabinets.size());
  for (const Cabinet& cab : inst.cabinets) {
    tagged.push_back(cabinet_value_curve(cab));
    sol.curves.push_back(tagged.back().curve);
  }
  sol.q = maximize_separable_concave(inst.matroid, sol.curves);
  sol.z = per_arrival_rates(sol.curves, sol.q);
  sol.objective = 0.0;
  for (std::size_t i = 0; i < sol.curves.size(); ++i) {
    sol.objective += sol.curves[i](sol.q.q[i]);
    sol.drawer_mixtures.push_back(recover_witness(tagged[i], sol.q.q[i]));
  }
  return sol;
}

ExAnteSolution solve_exante_cms(const CmsInstance& inst,
                                std::optional<FptasParams> fptas) {
  require_valid_instance(inst);
  ExAnteSolution sol;
  for (const Msp& proc : inst.processes) {
    sol.curves.push_back(fptas ? approx_value_curve(proc, fptas->c, fptas->eps)
                               : exact_value_curve(proc));
  }
  sol.q = maximize_separable_concave(inst.matroid, sol.curves);
  sol.z = per_arrival_rates(sol.curves, sol.q);
  sol.objective = 0.0;
  for (std::size_t i = 0; i < sol.curves.size(); ++i) {
    sol.objective += sol.curves[i](sol.q.q[i]);
  }
  return sol;
}

}  // namespace cms
