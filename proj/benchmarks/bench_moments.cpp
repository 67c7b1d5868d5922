#include <benchmark/benchmark.h>

#include "mmf/generators.hpp"
#include "mmf/moments.hpp"

namespace {

mmf::MeasurePair make_pair(int depth) {
  return mmf::preset_pair(mmf::preset_spec("binomial-pair"), depth);
}

void BM_MomentSum(benchmark::State& state) {
  const int depth = static_cast<int>(state.range(0));
  const mmf::MeasurePair pair = make_pair(depth);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        mmf::moment_sum(pair.mu, pair.nu, 2.0, 1.0, depth));
  }
  state.SetComplexityN(1 << depth);
  state.SetItemsProcessed(state.iterations() * (1ll << depth));
}
BENCHMARK(BM_MomentSum)->DenseRange(10, 18, 2)->Complexity(benchmark::oN);

void BM_ScaleTable(benchmark::State& state) {
  const int depth = static_cast<int>(state.range(0));
  const mmf::MeasurePair pair = make_pair(depth);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        mmf::build_scale_table(pair.mu, pair.nu, 2.0, 1.0, 1, depth));
  }
}
BENCHMARK(BM_ScaleTable)->DenseRange(10, 16, 2);

// the full 9x9 production grid at desk depth, single worker
void BM_TauSurface(benchmark::State& state) {
  const int depth = static_cast<int>(state.range(0));
  const mmf::MeasurePair pair = make_pair(depth);
  const std::vector<double> grid = mmf::parse_range("-2:2:0.5");
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        mmf::tau_surface(pair.mu, pair.nu, grid, grid, 4, depth, 1));
  }
}
BENCHMARK(BM_TauSurface)->DenseRange(10, 14, 2)
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
