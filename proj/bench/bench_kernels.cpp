// Serial reference against the OpenMP kernel for each batch loop.
// Arg 0 is serial, arg 1 parallel.

#include "convmeasure/dense_family.hpp"
#include "convmeasure/haar.hpp"
#include "convmeasure/measure.hpp"

#include <benchmark/benchmark.h>

using namespace convmeasure;

namespace {

Execution mode(const benchmark::State& state)
{
    return state.range(0) ? Execution::parallel : Execution::serial;
}

void BM_width(benchmark::State& state)
{
    SearchOptions options;
    options.execution = mode(state);
    const Body body = smooth_cap_body({make_dyadic(4, 7), 3});
    for (auto _ : state) benchmark::DoNotOptimize(width(body, options));
}

void BM_rotations(benchmark::State& state)
{
    for (auto _ : state) benchmark::DoNotOptimize(sample_rotations(3, 10000, 1, mode(state)));
}

void BM_base_measure(benchmark::State& state)
{
    for (auto _ : state) benchmark::DoNotOptimize(base_measure_mu(8, 3, {}, mode(state)));
}

void BM_sample_P(benchmark::State& state)
{
    static const auto nu = reweight_nu(base_measure_mu(10));
    SamplerConfig config;
    config.seed = 1;
    config.count = 10000;
    for (auto _ : state) benchmark::DoNotOptimize(sample_P_batch(nu, config, mode(state)));
}

void BM_dense_measure(benchmark::State& state)
{
    static const auto system = generate_point_system(17, 1);
    const DenseTruncation t{2, 3, 3, 8};
    for (auto _ : state) benchmark::DoNotOptimize(dense_measure(t, system, WeightTables::defaults(), {}, mode(state)));
}

} // namespace

BENCHMARK(BM_width)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_rotations)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_base_measure)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sample_P)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_dense_measure)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
