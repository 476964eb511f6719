#include <benchmark/benchmark.h>

#include "cseu/estimator.hpp"

using namespace cseu;

namespace {

ShadowData make_shadow(int d, std::size_t m) {
  CounterRng rng(5);
  const UnitaryOp u = haar_unitary(d, rng);
  return run_learning(u, {1, MeasurementMode::ContinuousHaar}, m, 99);
}

PredictionTask make_task(int d) {
  CounterRng rng(6);
  return PredictionTask(random_observable(d, 1.0, rng), DensityOp::from_pure(haar_state(d, rng)),
                        1.0);
}

}  // namespace

static void BM_batch_mean(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const std::size_t q = static_cast<std::size_t>(state.range(1));
  const ShadowData shadow = make_shadow(d, q);
  const PredictionTask task = make_task(d);
  for (auto _ : state) benchmark::DoNotOptimize(batch_mean(shadow.snapshots, task));
}
// q = 32 exercises the Gram route, q = 512 the aggregated-moment route.
BENCHMARK(BM_batch_mean)->Args({4, 32})->Args({4, 512})->Args({4, 4096});

static void BM_predict_many_16_tasks(benchmark::State& state) {
  const int d = 4;
  const ShadowData shadow = make_shadow(d, 300);
  CounterRng rng(7);
  std::vector<PredictionTask> tasks;
  for (int t = 0; t < 16; ++t)
    tasks.push_back(PredictionTask(random_observable(d, 1.0, rng),
                                   DensityOp::from_pure(haar_state(d, rng)), 1.0));
  const EstimatorParams params{5, true};
  for (auto _ : state) benchmark::DoNotOptimize(predict_many(shadow, tasks, params));
}
BENCHMARK(BM_predict_many_16_tasks);
