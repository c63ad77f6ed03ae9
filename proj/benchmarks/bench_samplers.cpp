#include <benchmark/benchmark.h>

#include "abc/estimators.hpp"
#include "abc/mcmc.hpp"
#include "abc/models/discrete.hpp"
#include "abc/models/fossil.hpp"
#include "abc/models/toy_mixture.hpp"
#include "abc/rejection.hpp"

using namespace abc;
using namespace abc::models;

namespace {

void BM_ToySimulate(benchmark::State& state) {
    ToyMixtureModel model;
    RngStream rng(1);
    const ParamVector theta{{0.3}};
    for (auto _ : state) {
        benchmark::DoNotOptimize(model.simulator().run(theta, rng));
    }
}
BENCHMARK(BM_ToySimulate);

void BM_RejectionToy(benchmark::State& state) {
    ToyMixtureModel model;
    const double delta = static_cast<double>(state.range(0)) / 10.0;
    for (auto _ : state) {
        RejectionConfig cfg(DiscrepancyKernel::uniform_ball(delta));
        cfg.n_proposals = 100000;
        cfg.seed = 2;
        benchmark::DoNotOptimize(
            run_rejection(model.prior(), model.simulator(), model.observation(), cfg));
    }
    state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_RejectionToy)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_ChainStepToy(benchmark::State& state) {
    ToyMixtureModel model;
    const auto kernel = DiscrepancyKernel::gaussian(1.0 / std::sqrt(3.0));
    const bool use_d = state.range(0) == 1;
    McmcConfig cfg(kernel, std::make_shared<GaussianWalkProposal>(std::vector<double>{1.0}));
    cfg.algorithm = use_d ? McmcAlgorithm::D : McmcAlgorithm::C;
    cfg.n_steps = 50000;
    cfg.burn_in = 0;
    cfg.seed = 3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_chain(cfg, model.prior(), model.simulator(), model.observation()));
    }
    state.SetItemsProcessed(state.iterations() * 50000);
}
BENCHMARK(BM_ChainStepToy)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_EvidenceDiscrete(benchmark::State& state) {
    const auto model = DiscreteOracleModel::make_default();
    const DataVector obs = model.observation(2);
    const auto kernel = DiscrepancyKernel::gaussian(0.6);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            estimate_evidence(model.prior(), model.simulator(), obs, kernel, 2000, 10, 4));
    }
    state.SetItemsProcessed(state.iterations() * 20000);
}
BENCHMARK(BM_EvidenceDiscrete)->Unit(benchmark::kMillisecond);

void BM_FossilTree(benchmark::State& state) {
    RngStream rng(5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate_fossil_counts(1.0, 0.0, 1.8, {-1.2, -0.6}, {}, rng));
    }
}
BENCHMARK(BM_FossilTree);

} // namespace

BENCHMARK_MAIN();
