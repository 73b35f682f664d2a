#include <benchmark/benchmark.h>

#include "infent/bell.hpp"
#include "infent/bipartite.hpp"
#include "infent/random.hpp"

using namespace infent;

static void BM_SeesawSinglet(benchmark::State& state) {
  const LinearOperator rho = max_entangled_projector(2);
  Rng rng(5);
  const ChshWitness init = random_witness(2, 2, rng);
  for (auto _ : state) benchmark::DoNotOptimize(beta_optimize_run(rho, init));
}
BENCHMARK(BM_SeesawSinglet);

static void BM_SeesawRestarts(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  Rng rng(6);
  const LinearOperator rho = random_density(d * d, rng).with_dims({d, d});
  RestartOptions opt;
  opt.seed = 7;
  opt.threads = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(beta_optimize_restarts(rho, opt));
}
BENCHMARK(BM_SeesawRestarts)->Args({2, 1})->Args({3, 1})->Args({4, 1})->Args({4, 4});

static void BM_TestOperator(benchmark::State& state) {
  const PairIndex m = PairIndex(1000000), k = PairIndex(999999);
  const ChshWitness w = tsirelson_witness();
  for (auto _ : state) benchmark::DoNotOptimize(test_operator_sequence(m, k, w));
}
BENCHMARK(BM_TestOperator);
