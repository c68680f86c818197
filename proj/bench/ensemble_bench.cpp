#include <benchmark/benchmark.h>

#include "lamcat/measure.hpp"
#include "lamcat/montecarlo.hpp"

namespace {

lamcat::ExperimentConfig bench_config(std::int64_t n) {
  lamcat::ExperimentConfig config;
  config.measure = lamcat::LambdaMeasure::beta(1.5);
  config.n_values = {n};
  config.r_max = 3;
  config.replicas = 64;
  config.master_seed = 7;
  config.mode = lamcat::Mode::totals;
  return config;
}

void bm_ensemble_serial(benchmark::State& state) {
  const auto config = bench_config(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(lamcat::run_ensemble_serial(config));
  state.SetItemsProcessed(state.iterations() * config.replicas);
}

void bm_ensemble_parallel(benchmark::State& state) {
  const auto config = bench_config(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(lamcat::run_ensemble(config));
  state.SetItemsProcessed(state.iterations() * config.replicas);
}

}  // namespace

BENCHMARK(bm_ensemble_serial)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_ensemble_parallel)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
