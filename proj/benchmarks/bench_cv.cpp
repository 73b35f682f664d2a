#include <benchmark/benchmark.h>

#include <cmath>

#include "infent/grid.hpp"
#include "infent/nopa.hpp"

using namespace infent;

static void BM_NopaState(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const NopaParams p = NopaParams::from_lambda(0.9, n);
  for (auto _ : state) benchmark::DoNotOptimize(nopa_state(p));
}
BENCHMARK(BM_NopaState)->RangeMultiplier(4)->Range(64, 1024);

static void BM_ExtractQudit(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const NopaParams p = NopaParams::from_lambda(0.9, 240 * d);
  for (auto _ : state) benchmark::DoNotOptimize(extract_qudit(p, d));
}
BENCHMARK(BM_ExtractQudit)->Arg(2)->Arg(3)->Arg(4);

static void BM_GridFidelity(benchmark::State& state) {
  const GridSpec spec = choose_weyl_grid(static_cast<std::size_t>(state.range(0)), kDefaultGridExtent, 2).spec;
  for (auto _ : state) benchmark::DoNotOptimize(grid_extraction_fidelity(spec, std::tanh(2.0), 2));
}
BENCHMARK(BM_GridFidelity)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
