#include <benchmark/benchmark.h>
#include <chdbc/initial_condition.hpp>
#include <chdbc/stepper.hpp>

namespace {

chdbc::SchemeParams params(int cells, chdbc::Scheme scheme) {
  chdbc::SchemeParams p;
  p.grid = chdbc::Grid(20.0, cells);
  p.dt = 0.02;
  p.gamma = 2.0;
  p.scheme = scheme;
  return p;
}

void step_bench(benchmark::State& state, chdbc::Scheme scheme) {
  const auto p = params(static_cast<int>(state.range(0)), scheme);
  const chdbc::Stepper stepper(p);
  const auto u = chdbc::conform_initial(
      chdbc::sample_extended(chdbc::FourierSeries::builtin("example1"), p.grid), scheme);
  int iterations = 0;
  for (auto _ : state) {
    auto r = stepper.step(u);
    iterations = r.iterations;
    benchmark::DoNotOptimize(r);
  }
  state.counters["fp_iters"] = iterations;
}

void BM_StepCentral(benchmark::State& s) { step_bench(s, chdbc::Scheme::dynamic_central); }
void BM_StepOnesided(benchmark::State& s) { step_bench(s, chdbc::Scheme::dynamic_onesided); }
void BM_StepNeumann(benchmark::State& s) { step_bench(s, chdbc::Scheme::neumann); }
BENCHMARK(BM_StepCentral)->RangeMultiplier(4)->Range(40, 2560);
BENCHMARK(BM_StepOnesided)->RangeMultiplier(4)->Range(40, 1024);
BENCHMARK(BM_StepNeumann)->RangeMultiplier(4)->Range(40, 2560);

}  // namespace

BENCHMARK_MAIN();
