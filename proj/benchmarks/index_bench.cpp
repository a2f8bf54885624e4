#include <benchmark/benchmark.h>

#include "germ/dold.hpp"
#include "germ/index.hpp"
#include "germs.hpp"

namespace {

void BM_IterateIndexExact(benchmark::State& state) {
  const germ::MapGerm f = bench::resonant_pair(2, 3, 4);
  for (auto _ : state) benchmark::DoNotOptimize(germ::iterate_index(f, state.range(0)));
}
BENCHMARK(BM_IterateIndexExact)->Arg(2)->Arg(3)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_IterateIndexNumerical(benchmark::State& state) {
  const germ::MapGerm f = bench::resonant_pair(2, 3, 4);
  germ::IndexOptions o;
  o.strategy = germ::IndexStrategy::numerical;
  o.radius = 0.5 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(germ::iterate_index(f, state.range(0), o));
}
BENCHMARK(BM_IterateIndexNumerical)->Arg(2)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_DoldLocal(benchmark::State& state) {
  const germ::MapGerm f = bench::resonant_pair(2, static_cast<int>(state.range(0)), 6);
  for (auto _ : state) benchmark::DoNotOptimize(germ::dold_local(f, 2 * state.range(0)));
}
BENCHMARK(BM_DoldLocal)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
