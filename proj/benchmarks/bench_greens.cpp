#include <benchmark/benchmark.h>
#include "exg/greens.hpp"

static void BM_GreenFunction(benchmark::State& state) {
  for (auto _ : state) {
    exg::GreenTable t = exg::green_function(static_cast<int>(state.range(0)), 2);
    benchmark::DoNotOptimize(t.g0);
  }
}
BENCHMARK(BM_GreenFunction)->Arg(128)->Arg(512);
