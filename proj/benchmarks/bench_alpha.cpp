#include <benchmark/benchmark.h>
#include "exg/limits.hpp"

static void BM_AlphaExact(benchmark::State& state) {
  exg::ModelParams p = exg::ModelParams::create(64, 1, 1.0, 1.0, 0.0);
  exg::AlphaOracle oracle(p, std::nullopt, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    double v = oracle(1.0, 0.5);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_AlphaExact)->Arg(1000)->Arg(10000);
