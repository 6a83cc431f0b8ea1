// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "edgerent/config.hpp"
#include "edgerent/replication.hpp"
#include "edgerent/validation.hpp"

using namespace edgerent;

namespace {

ExperimentConfig bench_config() {
    auto c = ExperimentConfig::defaults(5);
    c.horizon = 500;
    c.replications = 8;
    c.policies = {"oracle", "coerr", "cucb", "random"};
    return c;
}

void BM_ReplicationsSerial(benchmark::State& state) {
    const auto c = bench_config();
    for (auto _ : state) benchmark::DoNotOptimize(run_replications_serial(c));
}

void BM_ReplicationsParallel(benchmark::State& state) {
    const auto c = bench_config();
    for (auto _ : state) benchmark::DoNotOptimize(run_replications_parallel(c));
}

void BM_PacSerial(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(pac_monte_carlo_serial(200, 15.0, 300.0, 20000, 7));
}

void BM_PacParallel(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(pac_monte_carlo_parallel(200, 15.0, 300.0, 20000, 7));
}

}  // namespace

BENCHMARK(BM_ReplicationsSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ReplicationsParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_PacSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_PacParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
