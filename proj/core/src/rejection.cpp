#include "abc/rejection.hpp"

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace abc {

namespace {

struct PreparedRun {
    DataVector obs;            // kernel-space observation
    DiscrepancyKernel kernel;  // reference bound when the metric needs one
};

// Projects the observation into kernel space and binds the max_relative
// reference. Fails fast on dimension or flag mismatches instead of at the
// first proposal.
PreparedRun prepare(const Simulator& sim, const DataVector& obs, const DiscrepancyKernel& kernel,
                    const SummaryFn* summary) {
    PreparedRun p{obs, kernel};
    if (summary != nullptr && !obs.is_summary) {
        p.obs = summary->apply(obs);
    }
    const std::size_t x_dim = summary != nullptr ? summary->out_dim() : sim.output_dim();
    const bool x_summary = summary != nullptr;
    if (p.obs.dim() != x_dim || p.obs.is_summary != x_summary) {
        DataVector probe;
        probe.values.resize(x_dim);
        probe.is_summary = x_summary;
        validate_pair(p.obs, probe); // throws with a uniform message
    }
    if (kernel.dim() != p.obs.dim()) {
        throw DimensionMismatchError("kernel dimension " + std::to_string(kernel.dim()) +
                                     " does not match observation dimension " + std::to_string(p.obs.dim()));
    }
    if (kernel.metric() == Metric::MaxRelative) {
        p.kernel = kernel.with_reference(p.obs.values);
    }
    return p;
}

struct WorkerResult {
    std::vector<SampleEntry> entries;
    std::vector<std::uint8_t> decisions;
    std::uint64_t proposals = 0;
};

// One worker's Algorithm B loop. Stops at its proposal cap, or earlier once
// `quota` acceptances when a quota is set.
WorkerResult propose_loop(const Prior& prior, const Simulator& sim, const PreparedRun& run,
                          const SummaryFn* summary, const AcceptProbabilityFn& accept_prob,
                          std::uint64_t seed, unsigned worker, std::uint64_t proposal_cap,
                          std::optional<std::uint64_t> quota, bool weighting_mode,
                          bool record_decisions) {
    RngStream rng(seed, worker);
    WorkerResult out;
    while (out.proposals < proposal_cap) {
        if (quota && out.entries.size() >= *quota) break;
        ParamVector theta = prior.sample(rng);
        DataVector x = sim.run(theta, rng);
        if (summary != nullptr) x = summary->apply(x);
        ++out.proposals;
        if (weighting_mode) {
            const double w = run.kernel.density(difference(run.obs, x));
            out.entries.push_back(SampleEntry{std::move(theta), w, std::move(x)});
            continue;
        }
        const double p = accept_prob(run.obs, x);
        const bool accepted = rng.uniform01() < p;
        if (record_decisions) out.decisions.push_back(accepted ? 1 : 0);
        if (accepted) {
            out.entries.push_back(SampleEntry{std::move(theta), 1.0, std::move(x)});
        }
    }
    return out;
}

WeightedSample run_parallel(const Prior& prior, const Simulator& sim, const PreparedRun& run,
                            const SummaryFn* summary, const AcceptProbabilityFn& accept_prob,
                            const RejectionConfig& cfg, bool weighting_mode, const std::string& rule_name) {
    if (cfg.workers < 1) throw Error("rejection: workers must be >= 1");
    if (cfg.n_target.has_value() == cfg.n_proposals.has_value()) {
        throw Error("rejection: exactly one of n_target / n_proposals must be set");
    }
    if (weighting_mode && !cfg.n_proposals) {
        throw Error("run_weighted: n_proposals must be set");
    }

    const unsigned W = cfg.workers;
    std::uint64_t quota_total = 0;
    std::uint64_t cap_total = 0;
    if (cfg.n_target) {
        quota_total = *cfg.n_target;
        cap_total = cfg.budget_override != 0
                        ? cfg.budget_override
                        : std::max<std::uint64_t>(1'000'000, 10'000 * quota_total);
    } else {
        cap_total = *cfg.n_proposals;
    }

    std::vector<WorkerResult> results(W);
    std::vector<std::exception_ptr> failures(W);
    auto work = [&](unsigned w) {
        try {
            std::optional<std::uint64_t> quota;
            if (cfg.n_target) quota = quota_total / W + (w < quota_total % W ? 1 : 0);
            const std::uint64_t cap = cap_total / W + (w < cap_total % W ? 1 : 0);
            results[w] = propose_loop(prior, sim, run, summary, accept_prob, cfg.seed, w, cap, quota,
                                      weighting_mode, cfg.record_decisions);
        } catch (...) {
            failures[w] = std::current_exception();
        }
    };

    if (W == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(W);
        for (unsigned w = 0; w < W; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    for (auto& f : failures) {
        if (f) std::rethrow_exception(f);
    }

    WeightedSample sample;
    sample.meta.seed = cfg.seed;
    sample.meta.kernel = rule_name;
    sample.meta.algorithm = weighting_mode ? "weighted" : "rejection";
    for (auto& r : results) {
        sample.meta.total_proposals += r.proposals;
        std::move(r.entries.begin(), r.entries.end(), std::back_inserter(sample.entries));
        sample.meta.decisions.insert(sample.meta.decisions.end(), r.decisions.begin(), r.decisions.end());
    }
    sample.meta.acceptance_rate =
        sample.meta.total_proposals == 0
            ? 0.0
            : static_cast<double>(sample.size()) / static_cast<double>(sample.meta.total_proposals);
    sample.meta.all_weights_zero = sample.total_weight() == 0.0;

    if (!weighting_mode && sample.entries.empty()) {
        throw ZeroAcceptanceError("no acceptances in " + std::to_string(sample.meta.total_proposals) +
                                  " proposals; tolerance too small or model misfit");
    }
    return sample;
}

} // namespace

WeightedSample run_rejection(const Prior& prior, const Simulator& sim, const DataVector& obs,
                             const RejectionConfig& cfg) {
    const PreparedRun run = prepare(sim, obs, cfg.kernel, cfg.summary.get());
    const auto rule = [&run](const DataVector& d, const DataVector& x) {
        return run.kernel.acceptance_prob(difference(d, x));
    };
    return run_parallel(prior, sim, run, cfg.summary.get(), rule, cfg, /*weighting=*/false,
                        run.kernel.describe());
}

WeightedSample run_weighted(const Prior& prior, const Simulator& sim, const DataVector& obs,
                            const RejectionConfig& cfg) {
    const PreparedRun run = prepare(sim, obs, cfg.kernel, cfg.summary.get());
    return run_parallel(prior, sim, run, cfg.summary.get(), AcceptProbabilityFn{}, cfg,
                        /*weighting=*/true, run.kernel.describe());
}

WeightedSample run_rejection_with_rule(const Prior& prior, const Simulator& sim, const DataVector& obs,
                                       const AcceptProbabilityFn& rule, const RejectionConfig& cfg,
                                       const std::string& rule_name) {
    PreparedRun run{obs, cfg.kernel};
    if (cfg.summary != nullptr && !obs.is_summary) run.obs = cfg.summary->apply(obs);
    return run_parallel(prior, sim, run, cfg.summary.get(), rule, cfg, /*weighting=*/false, rule_name);
}

std::optional<std::pair<ParamVector, DataVector>> draw_single_accepted(
    const Prior& prior, const Simulator& sim, const DataVector& obs_kernel_space,
    const DiscrepancyKernel& kernel, const SummaryFn* summary, RngStream& rng, std::uint64_t budget) {
    for (std::uint64_t i = 0; i < budget; ++i) {
        ParamVector theta = prior.sample(rng);
        DataVector x = sim.run(theta, rng);
        if (summary != nullptr) x = summary->apply(x);
        const double p = kernel.acceptance_prob(difference(obs_kernel_space, x));
        if (rng.uniform01() < p) return std::make_pair(std::move(theta), std::move(x));
    }
    return std::nullopt;
}

} // namespace abc
