#include <benchmark/benchmark.h>

#include "formslab/divisor.hpp"
#include "formslab/lattice_count.hpp"
#include "formslab/metric_twist.hpp"
#include "formslab/volume_lab.hpp"

using namespace formslab;

static void BM_CountDisc(benchmark::State& state) {
    const auto F = parse_system("x1^2 + x2^2");
    const auto K = Domain::ball(2, 1);
    const double T = static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(count_inequality({F, K, T, 1.0, 1}));
}
BENCHMARK(BM_CountDisc)->RangeMultiplier(4)->Range(64, 4096);

static void BM_CountProduct3(benchmark::State& state) {
    const auto F = parse_system("x1*x2*x3");
    const auto K = Domain::cube(3, 0, 1);
    const double T = static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(count_inequality({F, K, T, 1.0, 1}));
}
BENCHMARK(BM_CountProduct3)->RangeMultiplier(4)->Range(16, 1024);

static void BM_VolumeBelow(benchmark::State& state) {
    const auto F = parse_system("x1^2 + x2^2 - x3^2");
    const auto K = Domain::ball(3, 1);
    for (auto _ : state) benchmark::DoNotOptimize(volume_below(F, K, 0.1, {state.range(0), 1, 1}));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_VolumeBelow)->Arg(1 << 14)->Arg(1 << 18);

static void BM_Divisor(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const double t = static_cast<double>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(divisor_summatory(n, t));
}
BENCHMARK(BM_Divisor)->Args({2, 10'000'000})->Args({3, 1'000'000});

static void BM_Trial(benchmark::State& state) {
    const auto Q = parse_system("x1^2 + x2^2 - x3^2");
    const auto g = sample_unimodular(3, 42, 10.0);
    const double eps = 1.0 / static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(uniform_approx_trial(Q, g, eps, 1.2, 10.0));
}
BENCHMARK(BM_Trial)->Arg(10)->Arg(100);
BENCHMARK_MAIN();
