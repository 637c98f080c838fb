// Serial reference kernels against their OpenMP counterparts.
//
//   ./bench_kernels --benchmark_filter=Experiment
//   OMP_NUM_THREADS=4 ./bench_kernels

#include "alphahash/harness.hpp"
#include "alphahash/oracle.hpp"
#include "alphahash/schemes.hpp"

#include <benchmark/benchmark.h>

using namespace alphahash;

namespace {

ExperimentConfig bench_config(SchemeKind kind, std::size_t k, std::size_t trials)
{
    ExperimentConfig cfg;
    cfg.scheme = make_scheme_config(1'000'000, k, 0.9, kind, CodeKind::elias_delta);
    cfg.trials = trials;
    cfg.base_seed = 1;
    return cfg;
}

void BM_ExperimentSerial(benchmark::State& state)
{
    const auto cfg = bench_config(static_cast<SchemeKind>(state.range(0)), static_cast<std::size_t>(state.range(1)),
                                  2000);
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_experiment_serial(cfg));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.trials));
}

void BM_ExperimentParallel(benchmark::State& state)
{
    const auto cfg = bench_config(static_cast<SchemeKind>(state.range(0)), static_cast<std::size_t>(state.range(1)),
                                  2000);
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_experiment(cfg));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.trials));
}

void experiment_args(benchmark::internal::Benchmark* b)
{
    b->Args({static_cast<int>(SchemeKind::perfect), 8});
    b->Args({static_cast<int>(SchemeKind::pfr), 12});
    b->Args({static_cast<int>(SchemeKind::mixture), 10});
    b->Unit(benchmark::kMillisecond);
}

void BM_EnumerateSerial(benchmark::State& state)
{
    for (auto _ : state) {
        benchmark::DoNotOptimize(oracle::enumerate_r_lambda_serial(static_cast<std::size_t>(state.range(0)),
                                                                   static_cast<std::size_t>(state.range(1))));
    }
}

void BM_EnumerateParallel(benchmark::State& state)
{
    for (auto _ : state) {
        benchmark::DoNotOptimize(oracle::enumerate_r_lambda(static_cast<std::size_t>(state.range(0)),
                                                            static_cast<std::size_t>(state.range(1))));
    }
}

void BM_PerfectSearch(benchmark::State& state)
{
    const auto k = static_cast<std::size_t>(state.range(0));
    const KeySet a = random_key_set(1'000'000, k, 3);
    const auto code = IntegerCode::elias_delta();
    std::uint64_t probes = 0;
    std::uint64_t i = 0;
    for (auto _ : state) {
        const auto r = perfect_encode(a, trial_seed(5, 0, i++), code);
        probes += r.probes;
    }
    state.counters["probes_per_encode"] =
        benchmark::Counter(static_cast<double>(probes) / static_cast<double>(state.iterations()));
    state.SetItemsProcessed(static_cast<std::int64_t>(probes));
}

void BM_PfrSearch(benchmark::State& state)
{
    const auto k = static_cast<std::size_t>(state.range(0));
    const KeySet a = random_key_set(1'000'000, k, 3);
    const UrnDistribution dist(k, lambda_for_alpha(0.9));
    const auto code = IntegerCode::elias_delta();
    std::uint64_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(pfr_encode(a, trial_seed(5, 0, i++), dist, code));
    }
}

}  // namespace

BENCHMARK(BM_ExperimentSerial)->Apply(experiment_args);
BENCHMARK(BM_ExperimentParallel)->Apply(experiment_args);
BENCHMARK(BM_EnumerateSerial)->Args({5, 2})->Args({6, 3})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnumerateParallel)->Args({5, 2})->Args({6, 3})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PerfectSearch)->Arg(8)->Arg(12)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_PfrSearch)->Arg(8)->Arg(12)->Arg(16)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
