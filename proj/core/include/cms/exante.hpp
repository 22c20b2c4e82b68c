#pragma once

#include <optional>
#include <vector>

#include "cms/instances.hpp"
#include "cms/matroid.hpp"
#include "cms/plconcave.hpp"

namespace cms {

// The best expected value a cabinet yields as a function of its claim
// probability: the concave envelope of the drawers' upper expectations. Hull
// vertices remember which drawer attains them so that, for any q, the
// achieving mixture of (drawer, quantile) pairs can be recovered.
struct CabinetCurve {
  PLConcave curve;
  struct Vertex {
    double q = 0.0;
    double value = 0.0;
    int drawer = 0;
  };
  std::vector<Vertex> vertices;
};

CabinetCurve cabinet_value_curve(const Cabinet& cab);

// Open drawer `drawer` with probability `weight` and claim values in its top
// `quantile` quantile; at most two parts.
struct DrawerMixture {
  struct Part {
    double weight = 0.0;
    int drawer = 0;
    double quantile = 0.0;
  };
  std::vector<Part> parts;
};

DrawerMixture recover_witness(const CabinetCurve& curve, double q);

// f(q): the optimal E[Perf] over policies on m that claim with probability at
// most q, computed exactly by backward induction with the piecewise-linear
// algebra. Raises SizeLimitError past breakpoint_budget total breakpoints.
PLConcave exact_value_curve(const Msp& m,
                            int breakpoint_budget = kDefaultBreakpointBudget);

// Grid approximation of exact_value_curve with guarantee
//   (f(q) - c) / (1 + eps) <= fhat(q) <= (f(q) + c) (1 + eps).
// Uses the geometric grid (0, b, b(1+alpha), ..., 1) with alpha = eps / (2|S|)
// and b = c / max V, ironing each intermediate curve on the grid. A process
// with max V = 0 yields the zero curve.
PLConcave approx_value_curve(const Msp& m, double c, double eps);

// Exact maximizer of sum_i f_i(q_i) over the matroid polytope: greedily pours
// probability mass into the coordinate with the steepest remaining positive
// slope until a breakpoint or a rank constraint stops it. Curves must be
// concave nondecreasing with f(0) = 0.
FractionalPoint maximize_separable_concave(const Matroid& m,
                                           const std::vector<PLConcave>& curves,
                                           int budget = kDefaultEnumerationBudget);

struct ExAnteSolution {
  FractionalPoint q;
  std::vector<PLConcave> curves;
  std::vector<double> z;  // curve_i(q_i) / q_i, 0 when q_i = 0
  double objective = 0.0;
  std::vector<DrawerMixture> drawer_mixtures;  // cabinets only
};

ExAnteSolution solve_exante_cabinets(const CabinetsInstance& inst);

struct FptasParams {
  double c = 1e-3;
  double eps = 0.1;
};

// Exact curves by default; pass FptasParams to use the grid approximation.
ExAnteSolution solve_exante_cms(const CmsInstance& inst,
                                std::optional<FptasParams> fptas = std::nullopt);

}  // namespace cms
