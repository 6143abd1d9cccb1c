#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "qfactor/factor_engine.hpp"
#include "qfactor/propagators.hpp"
#include "qfactor/quadratic_phase.hpp"
#include "qfactor/revival.hpp"

namespace {

void BM_GaussSumTable(benchmark::State& state) {
  const auto r = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(qfactor::gauss_sum_table(r, 1).values.data());
  }
  state.SetComplexityN(r);
}
BENCHMARK(BM_GaussSumTable)->RangeMultiplier(4)->Range(16, 4096)->Complexity(benchmark::oNSquared);

void BM_CurlicueSeries(benchmark::State& state) {
  const auto N = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(qfactor::curlicue_series(N).values.data());
  }
  state.SetComplexityN(N);
}
BENCHMARK(BM_CurlicueSeries)->RangeMultiplier(4)->Range(21, 3000)->Complexity(benchmark::oNSquared);

void BM_Autocorrelation(benchmark::State& state) {
  const auto N = state.range(0);
  const auto params = qfactor::RevivalParams::gaussian(N, qfactor::auto_delta_n(N));
  double tau = 7.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(qfactor::autocorrelation(params, tau));
    tau += 1e-3;
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(params.weight.terms.size()));
}
BENCHMARK(BM_Autocorrelation)->Arg(105)->Arg(1309)->Arg(10007);

void BM_FactorRevival(benchmark::State& state) {
  qfactor::FactorOptions options;
  options.samples = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(qfactor::factorize(state.range(0), qfactor::Method::revival, options));
  }
}
BENCHMARK(BM_FactorRevival)->Arg(1309)->Arg(4087)->Unit(benchmark::kMillisecond);

void BM_DecompositionSum(benchmark::State& state) {
  const auto params = qfactor::RevivalParams::gaussian(187, 40.0);
  const auto d = qfactor::decompose_real_time(33.21, 187, 50);
  for (auto _ : state) {
    benchmark::DoNotOptimize(qfactor::decomposition_sum(params, d.fraction, d.delta_t));
  }
}
BENCHMARK(BM_DecompositionSum);

void BM_PropagateTalbotDirect(benchmark::State& state) {
  const auto config = qfactor::PropagatorConfig::talbot(1.0, 64);
  const auto wave_grid = qfactor::uniform_grid(0.0, 1.0, 512, false);
  const auto wave = qfactor::gaussian_packet(wave_grid, 0.5, 0.05);
  const auto x = qfactor::uniform_grid(0.0, 1.0, 128, false);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        qfactor::propagate_talbot(wave, 0.13, config, qfactor::TalbotForm::direct, x).amplitude.data());
  }
}
BENCHMARK(BM_PropagateTalbotDirect)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
