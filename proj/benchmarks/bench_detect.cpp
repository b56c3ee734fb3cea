#include <benchmark/benchmark.h>

#include "hsad/detect.hpp"
#include "hsad/rng.hpp"

namespace {

hsad::HyperCube random_cube(int lines, int samples, int bands, std::uint64_t seed) {
    hsad::Xoshiro256pp rng(seed);
    hsad::HyperCube cube(lines, samples, bands);
    for (auto& v : cube.values) v = rng.uniform01();
    return cube;
}

// per-pixel detector cost at low vs high band counts; the spread is what
// the reduction step buys
void Lrx(benchmark::State& state) {
    const auto cube = random_cube(24, 24, static_cast<int>(state.range(0)), 11);
    const auto window = hsad::WindowConfig::single(15);
    for (auto _ : state) {
        auto map = hsad::local_rx(cube, window, 1e-6);
        benchmark::DoNotOptimize(map.scores.data());
    }
    state.SetItemsProcessed(state.iterations() * 24 * 24);
}
BENCHMARK(Lrx)->Arg(4)->Arg(32)->Unit(benchmark::kMillisecond);

void Dwrx(benchmark::State& state) {
    const auto cube = random_cube(24, 24, static_cast<int>(state.range(0)), 12);
    const auto window = hsad::WindowConfig::dual(5, 13);
    for (auto _ : state) {
        auto map = hsad::dwrx(cube, window, 1e-6);
        benchmark::DoNotOptimize(map.scores.data());
    }
    state.SetItemsProcessed(state.iterations() * 24 * 24);
}
BENCHMARK(Dwrx)->Arg(4)->Arg(32)->Unit(benchmark::kMillisecond);

void Dwest(benchmark::State& state) {
    const auto cube = random_cube(24, 24, static_cast<int>(state.range(0)), 13);
    const auto window = hsad::WindowConfig::dual(5, 13);
    for (auto _ : state) {
        auto map = hsad::dwest(cube, window, hsad::DwestConfig{});
        benchmark::DoNotOptimize(map.scores.data());
    }
    state.SetItemsProcessed(state.iterations() * 24 * 24);
}
BENCHMARK(Dwest)->Arg(4)->Arg(32)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
