#include <benchmark/benchmark.h>
#include "exg/flows.hpp"

static void BM_BuildFlow2d(benchmark::State& state) {
  for (auto _ : state) {
    exg::Flow f = exg::build_flow(static_cast<int>(state.range(0)), 2);
    benchmark::DoNotOptimize(f.energy);
  }
}
BENCHMARK(BM_BuildFlow2d)->Arg(16)->Arg(64)->Arg(128);

static void BM_BuildFlow3d(benchmark::State& state) {
  for (auto _ : state) {
    exg::Flow f = exg::build_flow(static_cast<int>(state.range(0)), 3);
    benchmark::DoNotOptimize(f.energy);
  }
}
BENCHMARK(BM_BuildFlow3d)->Arg(16)->Arg(32);
