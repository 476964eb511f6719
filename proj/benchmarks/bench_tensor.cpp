#include <benchmark/benchmark.h>

#include "cseu/cmat.hpp"
#include "cseu/states.hpp"

using namespace cseu;

static void BM_tensor_product(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  CounterRng rng(1);
  CMat a(d, d), b(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      a(i, j) = Complex(rng.normal(), rng.normal());
      b(i, j) = Complex(rng.normal(), rng.normal());
    }
  for (auto _ : state) benchmark::DoNotOptimize(tensor_product(a, b));
}
BENCHMARK(BM_tensor_product)->Arg(4)->Arg(16);

static void BM_sym_projector(benchmark::State& state) {
  const int t = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sym_projector(t, 2));
}
BENCHMARK(BM_sym_projector)->Arg(2)->Arg(4);

static void BM_permutation_operator(benchmark::State& state) {
  const std::vector<int> perm{2, 0, 3, 1};
  for (auto _ : state) benchmark::DoNotOptimize(permutation_operator(perm, 2));
}
BENCHMARK(BM_permutation_operator);

BENCHMARK_MAIN();
