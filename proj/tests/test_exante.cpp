#include <doctest.h>

#include <cmath>

#include "cms/exante.hpp"
#include "cms/oracles.hpp"
#include "cms/saup.hpp"
#include "support/generators.hpp"

using namespace cms;
using namespace cms::testing;

namespace {

Cabinet single_drawer(const std::vector<std::pair<double, double>>& vp) {
  Cabinet cab;
  for (const auto& [v, p] : vp) cab.scenarios.push_back({p, {v}});
  return cab;
}

}  // namespace

TEST_CASE("cabinet curve of a single risky drawer") {
  const CabinetCurve cc = cabinet_value_curve(single_drawer({{0.0, 0.5}, {10.0, 0.5}}));
  CHECK(cc.curve(0.5) == doctest::Approx(5.0));
  CHECK(cc.curve(1.0) == doctest::Approx(5.0));
  CHECK(cc.curve.supergradient(0.1) == doctest::Approx(10.0));
}

TEST_CASE("cabinet curve mixes drawers through the hull") {
  Cabinet cab;
  cab.scenarios = {{0.5, {10.0, 6.0}}, {0.5, {0.0, 6.0}}};
  const CabinetCurve cc = cabinet_value_curve(cab);
  CHECK(cc.curve(0.5) == doctest::Approx(5.0));
  CHECK(cc.curve(1.0) == doctest::Approx(6.0));
  CHECK(cc.curve(0.75) == doctest::Approx(5.5));
  const DrawerMixture mix = recover_witness(cc, 0.75);
  REQUIRE(mix.parts.size() == 2);
  CHECK(mix.parts[0].drawer == 0);
  CHECK(mix.parts[0].quantile == doctest::Approx(0.5));
  CHECK(mix.parts[1].drawer == 1);
  CHECK(mix.parts[1].quantile == doctest::Approx(1.0));
  CHECK(mix.parts[0].weight == doctest::Approx(0.5));
  // The witness reproduces both the point and the value.
  double q = 0.0, value = 0.0;
  for (const auto& part : mix.parts) {
    q += part.weight * part.quantile;
    const PLConcave g = upper_expectation(cab.marginal(part.drawer));
    value += part.weight * g(part.quantile);
  }
  CHECK(q == doctest::Approx(0.75));
  CHECK(value == doctest::Approx(cc.curve(0.75)));
}

TEST_CASE("all-zero drawers give the zero curve") {
  const CabinetCurve cc = cabinet_value_curve(single_drawer({{0.0, 1.0}}));
  CHECK(cc.curve(1.0) == 0.0);
  const DrawerMixture mix = recover_witness(cc, 0.3);
  CHECK(!mix.parts.empty());
}

TEST_CASE("witness recovery on random cabinets") {
  Rng meta(31);
  for (int trial = 0; trial < 40; ++trial) {
    const Cabinet cab = random_cabinet(meta);
    const CabinetCurve cc = cabinet_value_curve(cab);
    for (int k = 0; k <= 10; ++k) {
      const double q = k / 10.0;
      const DrawerMixture mix = recover_witness(cc, q);
      double point = 0.0, value = 0.0;
      for (const auto& part : mix.parts) {
        point += part.weight * part.quantile;
        value += part.weight *
                 upper_expectation(cab.marginal(part.drawer))(part.quantile);
      }
      CHECK(point == doctest::Approx(q).epsilon(1e-9));
      CHECK(value == doctest::Approx(cc.curve(q)).epsilon(1e-9));
    }
  }
}

TEST_CASE("exact curve of the coin box") {
  const PLConcave f = exact_value_curve(box_msp(0.1, {{0.0, 0.5}, {1.0, 0.5}}));
  CHECK(f(0.0) == 0.0);
  CHECK(f(0.25) == doctest::Approx(0.2));
  CHECK(f(0.5) == doctest::Approx(0.4));
  CHECK(f(1.0) == doctest::Approx(0.4));
  CHECK(f.supergradient(0.1) == doctest::Approx(0.8));
}

TEST_CASE("exact curve of a bare sink is linear") {
  const PLConcave f = exact_value_curve(sink_msp(3.0));
  CHECK(f(0.25) == doctest::Approx(0.75));
  CHECK(f(1.0) == doctest::Approx(3.0));
}

TEST_CASE("a process that cannot pay for itself has the zero curve") {
  const PLConcave f = exact_value_curve(box_msp(2.0, {{0.0, 0.5}, {1.0, 0.5}}));
  for (int k = 0; k <= 4; ++k) CHECK(f(k / 4.0) == 0.0);
}

TEST_CASE("curve endpoints and regularity on random processes") {
  Rng meta(64);
  for (int trial = 0; trial < 60; ++trial) {
    const Msp m = random_msp(meta);
    const PLConcave f = exact_value_curve(m);
    CHECK(f(0.0) == doctest::Approx(0.0));
    CHECK(f(1.0) == doctest::Approx(brute_force_saup(m, 0.0)).epsilon(1e-9));
    double max_v = 0.0;
    for (const MspState& st : m.states) max_v = std::max(max_v, st.value);
    CHECK(f.supergradient(0.0) <= max_v + 1e-9);
    double prev = 0.0;
    for (int k = 0; k <= 20; ++k) {
      const double v = f(k / 20.0);
      CHECK(v >= prev - 1e-12);
      prev = v;
    }
  }
}

TEST_CASE("grid approximation is exact on sinks") {
  const PLConcave fhat = approx_value_curve(sink_msp(3.0), 1e-3, 0.1);
  for (int k = 0; k <= 8; ++k) {
    CHECK(fhat(k / 8.0) == doctest::Approx(3.0 * k / 8.0).epsilon(1e-12));
  }
  CHECK(approx_value_curve(sink_msp(0.0), 1e-3, 0.1)(1.0) == 0.0);
}

TEST_CASE("grid approximation brackets the coin box value") {
  const Msp box = box_msp(0.1, {{0.0, 0.5}, {1.0, 0.5}});
  const double c = 1e-3, eps = 0.1;
  const PLConcave fhat = approx_value_curve(box, c, eps);
  const double lo = (0.4 - c) / (1.0 + eps);
  const double hi = (0.4 + c) * (1.0 + eps);
  CHECK(fhat(1.0) >= lo - 1e-12);
  CHECK(fhat(1.0) <= hi + 1e-12);
}

TEST_CASE("grid approximation sandwiches the exact curve everywhere") {
  Rng meta(128);
  for (int trial = 0; trial < 25; ++trial) {
    const Msp m = random_msp(meta, {8, 2, 3});
    const PLConcave f = exact_value_curve(m);
    for (const double c : {1e-2, 1e-3}) {
      for (const double eps : {0.05, 0.2}) {
        const PLConcave fhat = approx_value_curve(m, c, eps);
        for (int k = 0; k < 50; ++k) {
          const double q = meta.uniform01();
          const double exact = f(q);
          CHECK(fhat(q) >= (exact - c) / (1.0 + eps) - 1e-9);
          CHECK(fhat(q) <= (exact + c) * (1.0 + eps) + 1e-9);
        }
      }
    }
  }
}

TEST_CASE("separable concave maximization on hand examples") {
  const Matroid m = Matroid::uniform(2, 1);
  PLConcave f1({0.0, 0.5, 1.0}, {0.0, 1.0, 1.0});
  PLConcave f2 = PLConcave::linear(1.0);
  const FractionalPoint q = maximize_separable_concave(m, {f1, f2});
  CHECK(q.q[0] == doctest::Approx(0.5));
  CHECK(q.q[1] == doctest::Approx(0.5));
  CHECK(f1(q.q[0]) + f2(q.q[1]) == doctest::Approx(1.5));

  const FractionalPoint single =
      maximize_separable_concave(Matroid::uniform(1, 1), {PLConcave::linear(2.0)});
  CHECK(single.q[0] == doctest::Approx(1.0));

  const FractionalPoint zeros =
      maximize_separable_concave(m, {PLConcave(), PLConcave()});
  CHECK(zeros.q[0] == 0.0);
  CHECK(zeros.q[1] == 0.0);
}

TEST_CASE("separable concave maximization matches grid search") {
  Rng meta(256);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 2;
    const Matroid m = random_matroid(meta, n);
    std::vector<PLConcave> curves;
    for (int i = 0; i < n; ++i) {
      // Nondecreasing concave with breakpoints on the eighths grid.
      const int segs = pick(meta, 1, 3);
      auto widths = random_composition(meta, segs);
      std::vector<double> slopes;
      for (int s = 0; s < segs; ++s) slopes.push_back(0.5 * pick(meta, 0, 10));
      std::sort(slopes.rbegin(), slopes.rend());
      std::vector<double> xs = {0.0}, ys = {0.0};
      for (int s = 0; s < segs; ++s) {
        xs.push_back(xs.back() + widths[static_cast<std::size_t>(s)]);
        ys.push_back(ys.back() + slopes[static_cast<std::size_t>(s)] *
                                     widths[static_cast<std::size_t>(s)]);
      }
      xs.back() = 1.0;
      curves.push_back(PLConcave(std::move(xs), std::move(ys)));
    }
    const FractionalPoint got = maximize_separable_concave(m, curves);
    REQUIRE(polytope_member(m, got).member);
    double got_value = 0.0;
    for (int i = 0; i < n; ++i) got_value += curves[static_cast<std::size_t>(i)](got.q[static_cast<std::size_t>(i)]);
    double best = 0.0;
    const int steps = 1024;
    for (int a = 0; a <= steps; ++a) {
      for (int b = 0; b <= steps; ++b) {
        const FractionalPoint p{{a / static_cast<double>(steps),
                                 b / static_cast<double>(steps)}};
        if (!polytope_member(m, p).member) continue;
        best = std::max(best, curves[0](p.q[0]) + curves[1](p.q[1]));
      }
    }
    CHECK(got_value >= best - 1e-9);
    CHECK(got_value <= best + 1e-2);
  }
}

TEST_CASE("ex-ante solution for one risky cabinet") {
  CabinetsInstance inst;
  inst.cabinets.push_back(single_drawer({{0.0, 0.5}, {10.0, 0.5}}));
  inst.matroid = Matroid::uniform(1, 1);
  const ExAnteSolution sol = solve_exante_cabinets(inst);
  CHECK(sol.q.q[0] == doctest::Approx(0.5));
  CHECK(sol.objective == doctest::Approx(5.0));
  CHECK(sol.z[0] == doctest::Approx(10.0));
}

TEST_CASE("two identical risky cabinets fill the ex-ante budget") {
  CabinetsInstance inst;
  inst.cabinets.push_back(single_drawer({{0.0, 0.5}, {10.0, 0.5}}));
  inst.cabinets.push_back(single_drawer({{0.0, 0.5}, {10.0, 0.5}}));
  inst.matroid = Matroid::uniform(2, 1);
  const ExAnteSolution sol = solve_exante_cabinets(inst);
  CHECK(sol.q.q[0] == doctest::Approx(0.5));
  CHECK(sol.q.q[1] == doctest::Approx(0.5));
  CHECK(sol.objective == doctest::Approx(10.0));
  // The relaxation legitimately exceeds the adaptive optimum (7.5 here).
  CHECK(exante_upper_check(sol.objective, brute_force_opt_cabinets(inst)));
}

TEST_CASE("zero-value instances solve to zero") {
  CabinetsInstance inst;
  inst.cabinets.push_back(single_drawer({{0.0, 1.0}}));
  inst.matroid = Matroid::uniform(1, 1);
  const ExAnteSolution sol = solve_exante_cabinets(inst);
  CHECK(sol.objective == 0.0);
  CHECK(sol.z[0] == 0.0);
}

TEST_CASE("ex-ante solution for processes") {
  CmsInstance inst;
  inst.processes.push_back(box_msp(0.1, {{0.0, 0.5}, {1.0, 0.5}}));
  inst.matroid = Matroid::uniform(1, 1);
  const ExAnteSolution sol = solve_exante_cms(inst);
  CHECK(sol.q.q[0] == doctest::Approx(0.5));
  CHECK(sol.objective == doctest::Approx(0.4));
  CHECK(sol.z[0] == doctest::Approx(0.8));

  CmsInstance pair;
  pair.processes.push_back(box_msp(0.1, {{0.0, 0.5}, {1.0, 0.5}}));
  pair.processes.push_back(box_msp(0.1, {{0.0, 0.5}, {1.0, 0.5}}));
  pair.matroid = Matroid::uniform(2, 1);
  const ExAnteSolution both = solve_exante_cms(pair);
  CHECK(both.q.q[0] == doctest::Approx(0.5));
  CHECK(both.q.q[1] == doctest::Approx(0.5));
  CHECK(both.objective == doctest::Approx(0.8));

  const ExAnteSolution approx =
      solve_exante_cms(pair, FptasParams{1e-3, 0.1});
  CHECK(approx.objective >= (0.8 - 2e-3) / 1.1 - 1e-9);
  CHECK(approx.objective <= (0.8 + 2e-3) * 1.1 + 1e-9);
}

TEST_CASE("three-coordinate maximization dominates every grid point") {
  Rng meta(512);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 3;
    const Matroid m = random_matroid(meta, n, 2);
    std::vector<PLConcave> curves;
    for (int i = 0; i < n; ++i) {
      curves.push_back(upper_expectation(DiscreteDistribution(
          {{random_value(meta), 0.5}, {random_value(meta), 0.5}})));
    }
    const FractionalPoint got = maximize_separable_concave(m, curves);
    REQUIRE(polytope_member(m, got).member);
    double got_value = 0.0;
    for (int i = 0; i < n; ++i) {
      got_value += curves[static_cast<std::size_t>(i)](got.q[static_cast<std::size_t>(i)]);
    }
    const int steps = 64;
    for (int a = 0; a <= steps; ++a) {
      for (int b = 0; b <= steps; ++b) {
        for (int c = 0; c <= steps; ++c) {
          const FractionalPoint p{{a / 64.0, b / 64.0, c / 64.0}};
          if (!polytope_member(m, p).member) continue;
          const double v = curves[0](p.q[0]) + curves[1](p.q[1]) + curves[2](p.q[2]);
          REQUIRE(got_value >= v - 1e-9);
        }
      }
    }
  }
}
