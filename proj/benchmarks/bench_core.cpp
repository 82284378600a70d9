#include <benchmark/benchmark.h>

#include "mmcmax/clumping.hpp"
#include "mmcmax/erlang.hpp"
#include "mmcmax/harness.hpp"
#include "mmcmax/simulator.hpp"

using namespace mmcmax;

static void BM_SimulateOnce(benchmark::State& state) {
  const QueueParams params(2, 1.0 / 3.0, 0.25);
  const double horizon = double(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const SimConfig config{params, horizon, 0, CountConvention::in_system, seed++};
    benchmark::DoNotOptimize(simulate_once(config));
  }
}
BENCHMARK(BM_SimulateOnce)->Arg(100)->Arg(1000)->Arg(2500);

static void BM_ExactMaxCdf(benchmark::State& state) {
  const QueueParams params(2, 1.0 / 3.0, 0.25);
  const int level = int(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(exact_max_cdf(params, 50.0, level));
}
BENCHMARK(BM_ExactMaxCdf)->Arg(5)->Arg(10)->Arg(20);

static void BM_ErlangBlocking(benchmark::State& state) {
  const int servers = int(state.range(0));
  const QueueParams params(servers, 0.7 * servers, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(erlang_b_blocking(params));
}
BENCHMARK(BM_ErlangBlocking)->Arg(5)->Arg(50)->Arg(500);

static void BM_ErlangAAllBusy(benchmark::State& state) {
  const QueueParams params(3, 0.9, 0.5, 1e-4);  // slowly converging series
  for (auto _ : state) benchmark::DoNotOptimize(erlang_a_all_busy(params));
}
BENCHMARK(BM_ErlangAAllBusy);

static void BM_CdfTable(benchmark::State& state) {
  const MaxCdfApprox approx(QueueParams(3, 1.0 / 3.0, 1.0 / 6.0), 1000.0,
                            ApproxOrder::high);
  for (auto _ : state) {
    double sum = 0.0;
    for (int m = 0; m <= 60; ++m) sum += approx.pmf(m).value;
    benchmark::DoNotOptimize(sum);
  }
}
BENCHMARK(BM_CdfTable);

static void BM_RunExperiment(benchmark::State& state) {
  const ExperimentSpec spec{QueueParams(2, 1.0 / 3.0, 0.25), 200.0,
                            std::uint64_t(state.range(0)), 42,
                            CountConvention::in_system};
  for (auto _ : state) benchmark::DoNotOptimize(run_experiment(spec));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RunExperiment)->Arg(256)->Arg(2048)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
