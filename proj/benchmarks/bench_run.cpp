#include <benchmark/benchmark.h>
#include <chdbc/initial_condition.hpp>
#include <chdbc/stepper.hpp>

namespace {

// Desk-scale versions of the first and third examples.
void BM_RunExample1(benchmark::State& state) {
  chdbc::SchemeParams p;
  p.grid = chdbc::Grid(20.0, 40);
  p.dt = 0.02;
  p.gamma = 2.0;
  const auto u0 = chdbc::sample_extended(chdbc::FourierSeries::builtin("example1"), p.grid);
  for (auto _ : state) benchmark::DoNotOptimize(chdbc::run(u0, p, state.range(0)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RunExample1)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_RunExample3(benchmark::State& state) {
  chdbc::SchemeParams p;
  p.grid = chdbc::Grid(1.0, 50);
  p.dt = 0.002;
  p.gamma = 0.001;
  p.eps_ex = 1000.0;
  const auto u0 = chdbc::sample_extended(chdbc::FourierSeries::builtin("example3"), p.grid);
  for (auto _ : state) benchmark::DoNotOptimize(chdbc::run(u0, p, state.range(0)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RunExample3)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
