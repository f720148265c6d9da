#include <benchmark/benchmark.h>

#include "cubicw/glauber.hpp"

using namespace cubicw;

static void BM_HeatBathStep(benchmark::State& state) {
    const long n = state.range(0);
    ChainState st = make_chain({0.2, 0.5, n}, 42);
    for (auto _ : state) {
        heat_bath_step(st);
        benchmark::DoNotOptimize(st.s_cache);
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_HeatBathStep)->RangeMultiplier(10)->Range(100, 100000);

static void BM_SampleSweep(benchmark::State& state) {
    const long n = 1000;
    ChainState st = make_chain({0.2, 0.5, n}, 42);
    for (auto _ : state) {
        for (long i = 0; i < n; ++i) heat_bath_step(st);
        benchmark::DoNotOptimize(st.s_cache);
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_SampleSweep);

BENCHMARK_MAIN();
