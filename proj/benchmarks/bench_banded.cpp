#include <benchmark/benchmark.h>
#include <chdbc/banded.hpp>

#include <vector>

namespace {

void BM_Assemble(benchmark::State& state) {
  const int cells = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(chdbc::assemble(cells, {0.01, 1e4}, chdbc::BoundaryKind::dynamic));
  }
}
BENCHMARK(BM_Assemble)->RangeMultiplier(4)->Range(16, 4096);

void BM_Factorize(benchmark::State& state) {
  const int cells = static_cast<int>(state.range(0));
  const auto a = chdbc::assemble(cells, {0.01, 1e4}, chdbc::BoundaryKind::dynamic);
  for (auto _ : state) benchmark::DoNotOptimize(chdbc::BandedLU(a));
}
BENCHMARK(BM_Factorize)->RangeMultiplier(4)->Range(16, 4096);

void BM_Solve(benchmark::State& state) {
  const int cells = static_cast<int>(state.range(0));
  const chdbc::BandedLU lu(chdbc::assemble(cells, {0.01, 1e4}, chdbc::BoundaryKind::dynamic));
  const std::vector<double> rhs(static_cast<std::size_t>(cells + 1), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(lu.solve(rhs));
  state.SetComplexityN(cells);
}
BENCHMARK(BM_Solve)->RangeMultiplier(4)->Range(16, 4096)->Complexity(benchmark::oN);

}  // namespace

BENCHMARK_MAIN();
