#include <benchmark/benchmark.h>

#include "infent/bipartite.hpp"
#include "infent/modular.hpp"
#include "infent/operator.hpp"
#include "infent/random.hpp"

using namespace infent;

static void BM_Tensor(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  const LinearOperator a = random_unitary(d, rng), b = random_unitary(d, rng);
  for (auto _ : state) benchmark::DoNotOptimize(tensor(a, b));
}
BENCHMARK(BM_Tensor)->RangeMultiplier(2)->Range(2, 32);

static void BM_PartialTranspose(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  Rng rng(2);
  const LinearOperator rho = random_density(d * d, rng).with_dims({d, d});
  for (auto _ : state) benchmark::DoNotOptimize(partial_transpose(rho, kBob));
}
BENCHMARK(BM_PartialTranspose)->RangeMultiplier(2)->Range(2, 16);

static void BM_OperatorNorm(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(3);
  const LinearOperator a(random_ginibre(n, n, rng));
  for (auto _ : state) benchmark::DoNotOptimize(operator_norm(a));
}
BENCHMARK(BM_OperatorNorm)->RangeMultiplier(2)->Range(4, 128);

static void BM_ModularData(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  Rng rng(4);
  const BipartitePureState psi = BipartitePureState::from_vector(random_unit_vector(d * d, rng), d, d);
  for (auto _ : state) benchmark::DoNotOptimize(modular_data(psi));
}
BENCHMARK(BM_ModularData)->RangeMultiplier(2)->Range(2, 16);
