#include <benchmark/benchmark.h>

#include "cseu/measurement.hpp"

using namespace cseu;

static void BM_haar_state(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  CounterRng rng(2);
  for (auto _ : state) benchmark::DoNotOptimize(haar_state(d, rng));
}
BENCHMARK(BM_haar_state)->Arg(2)->Arg(8);

static void BM_learning_round(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const int s = static_cast<int>(state.range(1));
  CounterRng rng(3);
  const UnitaryOp u = haar_unitary(d, rng);
  const CollectiveMeasurementSpec spec{s, MeasurementMode::ContinuousHaar};
  for (auto _ : state) benchmark::DoNotOptimize(learning_round(u, spec, rng));
}
BENCHMARK(BM_learning_round)->Args({2, 1})->Args({8, 1})->Args({8, 8});

static void BM_rgcm_round(benchmark::State& state) {
  CounterRng rng(4);
  const UnitaryOp u = haar_unitary(4, rng);
  const CollectiveMeasurementSpec spec{1, MeasurementMode::Rgcm};
  for (auto _ : state) benchmark::DoNotOptimize(learning_round(u, spec, rng));
}
BENCHMARK(BM_rgcm_round);
