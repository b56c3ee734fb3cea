#include <benchmark/benchmark.h>

#include "hsad/rng.hpp"
#include "hsad/wavelet.hpp"

namespace {

std::vector<double> random_signal(std::size_t n, std::uint64_t seed) {
    hsad::Xoshiro256pp rng(seed);
    std::vector<double> out(n);
    for (auto& v : out) v = rng.uniform01();
    return out;
}

void DwtLevel(benchmark::State& state) {
    const auto filters = hsad::daubechies_filters(static_cast<int>(state.range(1)));
    const auto signal = random_signal(static_cast<std::size_t>(state.range(0)), 1);
    for (auto _ : state) {
        auto bands = hsad::dwt_level(signal, filters);
        benchmark::DoNotOptimize(bands.approx.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(DwtLevel)->Args({256, 2})->Args({256, 10})->Args({4096, 2});

void MultilevelApprox189(benchmark::State& state) {
    const auto filters = hsad::daubechies_filters(static_cast<int>(state.range(0)));
    const auto signal = random_signal(189, 2);
    for (auto _ : state) {
        auto approx = hsad::multilevel_approx(signal, filters, 4);
        benchmark::DoNotOptimize(approx.data());
    }
}
BENCHMARK(MultilevelApprox189)->Arg(2)->Arg(4);

void ReduceCube(benchmark::State& state) {
    hsad::Xoshiro256pp rng(3);
    hsad::HyperCube cube(32, 32, 189);
    for (auto& v : cube.values) v = rng.uniform01();
    const auto filters = hsad::daubechies_filters(2);
    for (auto _ : state) {
        auto reduced = hsad::reduce_cube(cube, filters, 4);
        benchmark::DoNotOptimize(reduced.values.data());
    }
    state.SetItemsProcessed(state.iterations() * 32 * 32);
}
BENCHMARK(ReduceCube);

} // namespace

BENCHMARK_MAIN();
