#include <benchmark/benchmark.h>

#include "cubicw/density.hpp"
#include "cubicw/law.hpp"

using namespace cubicw;

static void BM_BuildLaw(benchmark::State& state) {
    const long n = state.range(0);
    for (auto _ : state) {
        auto law = build_law({0.2, 0.5, n});
        benchmark::DoNotOptimize(law.log_Z);
    }
    state.SetComplexityN(n);
}
BENCHMARK(BM_BuildLaw)->RangeMultiplier(4)->Range(1 << 10, 1 << 18)->Complexity();

static void BM_KolmogorovToNormal(benchmark::State& state) {
    const long n = state.range(0);
    const ModelParams p{0.2, 0.5, n};
    const auto law = build_law(p);
    const auto rv = phase_rescaling(p, 0.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(kolmogorov_to_cdf(law, rv, normal_cdf));
    }
    state.SetComplexityN(n);
}
BENCHMARK(BM_KolmogorovToNormal)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Complexity();

static void BM_LogTail(benchmark::State& state) {
    const ModelParams p{0.2, 0.5, 1 << 16};
    const auto law = build_law(p);
    const auto rv = phase_rescaling(p, 0.0);
    double x = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(log_tail_above(law, rv, 1.0 + x));
        x = x < 5.0 ? x + 0.1 : 0.0;
    }
}
BENCHMARK(BM_LogTail);

BENCHMARK_MAIN();
