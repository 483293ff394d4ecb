#include <benchmark/benchmark.h>
#include "exg/kmc.hpp"

// event throughput of the plain simulator (no observers)
static void BM_SimulateD1(benchmark::State& state) {
  exg::ModelParams p = exg::ModelParams::create(static_cast<int>(state.range(0)), 1, 1.0, 1.0, 0.0);
  uint64_t events = 0;
  uint64_t rep = 0;
  for (auto _ : state) {
    exg::SimOptions opt;
    opt.sample_times = {0.01};
    exg::Trajectory tr = exg::simulate(p, 0.01, 42, rep++, opt);
    events += tr.event_count;
    benchmark::DoNotOptimize(tr.gamma_horizon);
  }
  state.counters["events/s"] = benchmark::Counter(static_cast<double>(events),
                                                  benchmark::Counter::kIsRate);
}
BENCHMARK(BM_SimulateD1)->Arg(64)->Arg(256);

static void BM_SimulateD2(benchmark::State& state) {
  exg::ModelParams p = exg::ModelParams::create(32, 2, 1.0, 1.0, 0.05);
  uint64_t events = 0;
  uint64_t rep = 0;
  for (auto _ : state) {
    exg::SimOptions opt;
    opt.sample_times = {0.002};
    exg::Trajectory tr = exg::simulate(p, 0.002, 42, rep++, opt);
    events += tr.event_count;
    benchmark::DoNotOptimize(tr.gamma_horizon);
  }
  state.counters["events/s"] = benchmark::Counter(static_cast<double>(events),
                                                  benchmark::Counter::kIsRate);
}
BENCHMARK(BM_SimulateD2);

BENCHMARK_MAIN();
