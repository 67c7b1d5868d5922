#include <benchmark/benchmark.h>

#include <cstdint>

#include "mmf/generators.hpp"
#include "mmf/point_cloud.hpp"
#include "mmf/projection.hpp"

namespace {

void BM_SampleGrassmann(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int m = n / 2;
  std::uint64_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mmf::sample_grassmann(n, m, 7, k++));
  }
}
BENCHMARK(BM_SampleGrassmann)->RangeMultiplier(2)->Range(2, 16);

// planar pair pushed through one sampled line, end to end
void BM_ProjectPair(benchmark::State& state) {
  const int depth = static_cast<int>(state.range(0));
  const mmf::MeasurePair pair =
      mmf::preset_pair(mmf::preset_spec("product-binomial"), depth);
  const mmf::Subspace V = mmf::sample_grassmann(2, 1, 7, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mmf::project_pair(pair.mu, pair.nu, V, 2, depth));
  }
  state.SetItemsProcessed(state.iterations() * pair.mu.cell_count());
}
BENCHMARK(BM_ProjectPair)->DenseRange(6, 10, 2)->Unit(benchmark::kMillisecond);

// regridding alone: the scatter-accumulate that dominates projection
void BM_Regrid(benchmark::State& state) {
  const int depth = static_cast<int>(state.range(0));
  const mmf::MeasurePair pair =
      mmf::preset_pair(mmf::preset_spec("product-binomial"), depth);
  const mmf::Subspace V = mmf::sample_grassmann(2, 1, 7, 0);
  const mmf::PointCloud cloud =
      mmf::project_cloud(mmf::grid_to_cloud(pair.mu), V);
  const auto [lo, hi] = mmf::cloud_bounds(cloud);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mmf::regrid(cloud, 2, depth, lo, hi));
  }
  state.SetItemsProcessed(state.iterations() * cloud.size());
}
BENCHMARK(BM_Regrid)->DenseRange(6, 10, 2);

}  // namespace
