#include <benchmark/benchmark.h>

#include "abc/kernels.hpp"
#include "abc/random.hpp"

using namespace abc;

namespace {

void BM_UniformBallDensity(benchmark::State& state) {
    const auto k = DiscrepancyKernel::uniform_ball(0.5);
    RngStream rng(1);
    DataVector diff{{0.0}};
    for (auto _ : state) {
        diff.values[0] = rng.uniform(-1.0, 1.0);
        benchmark::DoNotOptimize(k.density(diff));
    }
}
BENCHMARK(BM_UniformBallDensity);

void BM_EpanechnikovDensity(benchmark::State& state) {
    const auto k = DiscrepancyKernel::epanechnikov(0.5);
    RngStream rng(2);
    DataVector diff{{0.0}};
    for (auto _ : state) {
        diff.values[0] = rng.uniform(-1.0, 1.0);
        benchmark::DoNotOptimize(k.density(diff));
    }
}
BENCHMARK(BM_EpanechnikovDensity);

void BM_GaussianLogDensity(benchmark::State& state) {
    const auto k = DiscrepancyKernel::gaussian(std::vector<double>(state.range(0), 0.3));
    RngStream rng(3);
    DataVector diff;
    diff.values.resize(state.range(0));
    for (auto _ : state) {
        for (auto& v : diff.values) v = rng.uniform(-1.0, 1.0);
        benchmark::DoNotOptimize(k.log_density(diff));
    }
}
BENCHMARK(BM_GaussianLogDensity)->Arg(1)->Arg(3)->Arg(16);

void BM_ProductDensity(benchmark::State& state) {
    const auto k = DiscrepancyKernel::product({DiscrepancyKernel::uniform_ball(0.5),
                                               DiscrepancyKernel::gaussian(0.3),
                                               DiscrepancyKernel::epanechnikov(0.7)});
    RngStream rng(4);
    DataVector diff{{0.0, 0.0, 0.0}};
    for (auto _ : state) {
        for (auto& v : diff.values) v = rng.uniform(-1.0, 1.0);
        benchmark::DoNotOptimize(k.density(diff));
    }
}
BENCHMARK(BM_ProductDensity);

void BM_KernelErrorDraw(benchmark::State& state) {
    const auto k = DiscrepancyKernel::epanechnikov(0.5);
    RngStream rng(5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(k.sample_error(rng));
    }
}
BENCHMARK(BM_KernelErrorDraw);

} // namespace

BENCHMARK_MAIN();
