#include <benchmark/benchmark.h>

#include "mmf/generators.hpp"
#include "mmf/spectra.hpp"

namespace {

void BM_Cascade(benchmark::State& state) {
  const int depth = static_cast<int>(state.range(0));
  const mmf::SelfSimilarSpec spec = mmf::preset_spec("binomial-pair");
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        mmf::multinomial_cascade(spec, mmf::Component::First, depth));
  }
  state.SetItemsProcessed(state.iterations() * (1ll << depth));
}
BENCHMARK(BM_Cascade)->DenseRange(12, 18, 2);

void BM_ProductMeasure(benchmark::State& state) {
  const int depth = static_cast<int>(state.range(0));
  const mmf::SelfSimilarSpec spec = mmf::preset_spec("binomial-pair");
  const mmf::GridMeasure a =
      mmf::multinomial_cascade(spec, mmf::Component::First, depth);
  const mmf::GridMeasure b =
      mmf::multinomial_cascade(spec, mmf::Component::Second, depth);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mmf::product_measure(a, b));
  }
  state.SetItemsProcessed(state.iterations() * a.cell_count() *
                          b.cell_count());
}
BENCHMARK(BM_ProductMeasure)->DenseRange(6, 9, 1);

void BM_PointwiseExponents(benchmark::State& state) {
  const int depth = static_cast<int>(state.range(0));
  const mmf::MeasurePair pair =
      mmf::preset_pair(mmf::preset_spec("binomial-pair"), depth);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        mmf::pointwise_exponents(pair.mu, pair.nu, 1, depth));
  }
  state.SetItemsProcessed(state.iterations() * pair.mu.cell_count());
}
BENCHMARK(BM_PointwiseExponents)->DenseRange(10, 14, 2);

void BM_HistogramSpectrum(benchmark::State& state) {
  const int depth = static_cast<int>(state.range(0));
  const mmf::MeasurePair pair =
      mmf::preset_pair(mmf::preset_spec("binomial-pair"), depth);
  const mmf::ExponentField field =
      mmf::pointwise_exponents(pair.mu, pair.nu, 1, depth);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mmf::histogram_spectrum(field, 0.2, depth));
  }
}
BENCHMARK(BM_HistogramSpectrum)->DenseRange(10, 14, 2);

}  // namespace
