#ifndef ABC_REJECTION_HPP
#define ABC_REJECTION_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <utility>

#include "abc/kernels.hpp"
#include "abc/prior.hpp"
#include "abc/sample.hpp"
#include "abc/simulator.hpp"

namespace abc {

/// Settings for the rejection samplers. Exactly one of n_target (accept
/// until that many draws are kept) and n_proposals (propose exactly that
/// many times) must be set.
struct RejectionConfig {
    explicit RejectionConfig(DiscrepancyKernel k) : kernel(std::move(k)) {}

    DiscrepancyKernel kernel;
    std::optional<std::uint64_t> n_target;
    std::optional<std::uint64_t> n_proposals;
    std::shared_ptr<const SummaryFn> summary; // optional projection applied to obs and X
    std::uint64_t seed = 0;
    unsigned workers = 1;
    /// Record the per-proposal accept flags in meta.decisions,
    /// concatenated in (worker, local index) order.
    bool record_decisions = false;
    /// Proposal budget before ZeroAcceptanceError in n_target mode;
    /// 0 means the default max(1e6, 1e4 * n_target).
    std::uint64_t budget_override = 0;
};

/// Probabilistic approximate rejection: draw theta from the prior, simulate
/// X, accept with probability pi_eps(D - X)/c. With a UniformBall kernel the
/// acceptance degenerates to the hard cutoff rho(X, D) <= delta.
///
/// Accepted draws come from the posterior of the error-augmented model
/// D = eta(theta) + eps. Entries keep the simulated output (kernel-space,
/// i.e. post-summary) and meta records total proposals so the empirical
/// acceptance rate is recoverable.
///
/// Workers propose independently on streams seeded (seed, worker); results
/// merge in (worker, local index) order, so output is independent of thread
/// scheduling. Per-proposal stream order is fixed: draw theta, simulate,
/// then one accept uniform.
WeightedSample run_rejection(const Prior& prior, const Simulator& sim, const DataVector& obs,
                             const RejectionConfig& cfg);

/// No rejection step: every proposed theta_i is returned with weight
/// pi_eps(D - X_i). All weights zero is permitted and flagged in meta.
WeightedSample run_weighted(const Prior& prior, const Simulator& sim, const DataVector& obs,
                            const RejectionConfig& cfg);

/// Generalized acceptance rule for samplers whose accept probability is not
/// a kernel density ratio (e.g. the exact binomial thinning of the fossil
/// model). Takes the observation and the kernel-space simulator output.
using AcceptProbabilityFn = std::function<double(const DataVector& obs, const DataVector& x)>;

/// run_rejection with an arbitrary acceptance rule; cfg.kernel is used only
/// for the meta descriptor.
WeightedSample run_rejection_with_rule(const Prior& prior, const Simulator& sim, const DataVector& obs,
                                       const AcceptProbabilityFn& rule, const RejectionConfig& cfg,
                                       const std::string& rule_name);

/// One accepted (theta, X) pair from the Algorithm B loop, for chain
/// initialization. Consumes the caller's stream; returns nullopt once
/// `budget` proposals pass without an acceptance.
std::optional<std::pair<ParamVector, DataVector>> draw_single_accepted(
    const Prior& prior, const Simulator& sim, const DataVector& obs_kernel_space,
    const DiscrepancyKernel& kernel, const SummaryFn* summary, RngStream& rng, std::uint64_t budget);

} // namespace abc

#endif // ABC_REJECTION_HPP
