#include <benchmark/benchmark.h>

#include "cubicw/density.hpp"

using namespace cubicw;

static void BM_NormalizeMixed(benchmark::State& state) {
    for (auto _ : state) {
        auto d = LimitDensity::mixed(-1.0, 1.0);
        benchmark::DoNotOptimize(d.log_c());
    }
}
BENCHMARK(BM_NormalizeMixed);

static void BM_CdfQueries(benchmark::State& state) {
    const auto d = LimitDensity::mixed(-1.0, 1.0);
    double z = -6.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(d.cdf(z));
        z = z < 6.0 ? z + 0.01 : -6.0;
    }
}
BENCHMARK(BM_CdfQueries);

static void BM_GaussianTail(benchmark::State& state) {
    const auto d = LimitDensity::gaussian();
    double x = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(d.tail(x));
        x = x < 9.0 ? x + 0.5 : 0.0;
    }
}
BENCHMARK(BM_GaussianTail);

BENCHMARK_MAIN();
