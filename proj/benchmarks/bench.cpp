#include <benchmark/benchmark.h>

#include "cms/exante.hpp"
#include "cms/indices.hpp"
#include "cms/matroid.hpp"
#include "cms/prophet.hpp"
#include "cms/saup.hpp"
#include "support/generators.hpp"

using namespace cms;
using namespace cms::testing;

namespace {

Msp bench_msp(int states) {
  Rng rng(1);
  return random_msp(rng, {states, 2, 3});
}

void BM_SolveSaup(benchmark::State& state) {
  const Msp m = bench_msp(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_saup(m, 0.5).value);
  }
}
BENCHMARK(BM_SolveSaup)->Arg(6)->Arg(12)->Arg(24);

void BM_ComputeIndices(benchmark::State& state) {
  Rng rng(2);
  const Msp m = random_bandit(rng, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(compute_indices(m).sigma[0]);
  }
}
BENCHMARK(BM_ComputeIndices)->Arg(6)->Arg(16);

void BM_ExactValueCurve(benchmark::State& state) {
  const Msp m = bench_msp(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(exact_value_curve(m)(1.0));
  }
}
BENCHMARK(BM_ExactValueCurve)->Arg(6)->Arg(10);

void BM_ApproxValueCurve(benchmark::State& state) {
  const Msp m = bench_msp(8);
  const double c = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(approx_value_curve(m, c, 0.1)(1.0));
  }
}
BENCHMARK(BM_ApproxValueCurve)->Arg(100)->Arg(10000);

void BM_PipageSample(benchmark::State& state) {
  Rng rng(3);
  const int n = static_cast<int>(state.range(0));
  const Matroid m = random_matroid(rng, n);
  const FractionalPoint q = random_feasible_point(rng, m);
  PipageSampler sampler(m, q);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sampler.sample(++seed).size());
  }
}
BENCHMARK(BM_PipageSample)->Arg(4)->Arg(8)->Arg(12);

void BM_CabinetsProphetRun(benchmark::State& state) {
  Rng rng(4);
  const CabinetsInstance inst = random_cabinets_instance(rng, 5, 2);
  const ExAnteSolution sol = solve_exante_cabinets(inst);
  ThresholdEngine engine(inst.matroid, sol.q, sol.z, {});
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_cabinets_prophet(inst, engine, ++seed).welfare);
  }
}
BENCHMARK(BM_CabinetsProphetRun);

void BM_CmsProphetRun(benchmark::State& state) {
  Rng rng(5);
  const CmsInstance inst = random_cms_instance(rng, 3, {4, 2, 2}, 2);
  const CmsProphetPlan plan(inst, 0.1);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(plan.run(++seed).welfare);
  }
}
BENCHMARK(BM_CmsProphetRun);

}  // namespace

BENCHMARK_MAIN();
