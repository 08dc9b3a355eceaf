// Serial reference vs OpenMP kernels.
#include <benchmark/benchmark.h>

#include <vector>

#include "sisclosure/generator.hpp"
#include "sisclosure/ssa.hpp"

using namespace sisclosure;

namespace {

std::vector<double> uniform_distribution(int N) {
    return std::vector<double>(static_cast<std::size_t>(N) + 1, 1.0 / (N + 1));
}

void BM_GeneratorSerial(benchmark::State& state) {
    const int N = static_cast<int>(state.range(0));
    const auto coeffs = build_sis_complete({N, 5.0, 2.0});
    const auto p = uniform_distribution(N);
    std::vector<double> dp(p.size());
    for (auto _ : state) {
        apply_generator_serial(coeffs, p, dp);
        benchmark::DoNotOptimize(dp.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(p.size()));
}

void BM_GeneratorParallel(benchmark::State& state) {
    const int N = static_cast<int>(state.range(0));
    const auto coeffs = build_sis_complete({N, 5.0, 2.0});
    const auto p = uniform_distribution(N);
    std::vector<double> dp(p.size());
    for (auto _ : state) {
        apply_generator(coeffs, p, dp);
        benchmark::DoNotOptimize(dp.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(p.size()));
}

SsaConfig ssa_config(long runs) {
    return {static_cast<std::size_t>(runs), {1.0, 5.0}, 1};
}

void BM_GillespieSerial(benchmark::State& state) {
    const auto coeffs = build_sis_complete({20, 5.0, 2.0});
    const auto config = ssa_config(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(gillespie_run_serial(coeffs, 1, config));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_GillespieParallel(benchmark::State& state) {
    const auto coeffs = build_sis_complete({20, 5.0, 2.0});
    const auto config = ssa_config(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(gillespie_run(coeffs, 1, config));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

} // namespace

BENCHMARK(BM_GeneratorSerial)->RangeMultiplier(8)->Range(1 << 8, 1 << 20);
BENCHMARK(BM_GeneratorParallel)->RangeMultiplier(8)->Range(1 << 8, 1 << 20);
BENCHMARK(BM_GillespieSerial)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GillespieParallel)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
