#ifndef ABC_MCMC_HPP
#define ABC_MCMC_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "abc/kernels.hpp"
#include "abc/prior.hpp"
#include "abc/proposal.hpp"
#include "abc/sample.hpp"
#include "abc/simulator.hpp"

namespace abc {

/// Chain state. `x` and the cached log pi_eps(D - x) are present for
/// Algorithm D, which walks the joint parameter-output space; Algorithm C
/// keeps only theta.
struct ChainState {
    ParamVector theta;
    std::optional<DataVector> x;
    double log_weight_cache = 0.0;
};

struct StepResult {
    ChainState state;
    bool accepted = false;
    double accept_prob = 0.0;
    bool nonfinite_ratio = false; // NaN log-ratio; proposal was rejected fail-safe
};

enum class McmcAlgorithm { C, D };
enum class ChainInit { Rejection, PriorDraw, Explicit };

struct McmcConfig {
    McmcConfig(DiscrepancyKernel k, std::shared_ptr<const ProposalKernel> p)
        : kernel(std::move(k)), proposal(std::move(p)) {}

    DiscrepancyKernel kernel;
    std::shared_ptr<const ProposalKernel> proposal;
    McmcAlgorithm algorithm = McmcAlgorithm::C;
    std::uint64_t n_steps = 0;
    std::uint64_t burn_in = 0;  // must be < n_steps
    std::uint64_t thin = 1;
    ChainInit init = ChainInit::Rejection;
    std::optional<ChainState> init_state; // used when init == Explicit
    std::uint64_t init_budget = 1'000'000;
    std::uint64_t seed = 0;
    unsigned n_chains = 1;
};

/// One Metropolis step of Algorithm C on parameter space: propose
/// theta' ~ q(theta_t, .), simulate X' ~ eta(theta'), accept with
/// probability pi_eps(D - X')/c * min(1, q(theta',theta_t)pi(theta') /
/// (q(theta_t,theta')pi(theta_t))), else keep theta_t.
///
/// Stream order per step: proposal draws; if theta' is in the prior
/// support, the simulation draws and then one accept uniform. Out-of-support
/// proposals are rejected without consuming further draws.
StepResult step_algorithm_c(const ChainState& state, const DataVector& obs, const Prior& prior,
                            const Simulator& sim, const ProposalKernel& proposal,
                            const DiscrepancyKernel& kernel, RngStream& rng);

/// One step of Algorithm D on the joint space: propose (theta', X') with X'
/// simulated at theta', accept the pair with probability
/// min(1, pi_eps(D-X')q(theta',theta_t)pi(theta') /
///        (pi_eps(D-X_t)q(theta_t,theta')pi(theta_t))).
/// No normalizing constant c is involved. The current state must have
/// pi_eps(D - x) > 0 or InvalidStateError is raised.
StepResult step_algorithm_d(const ChainState& state, const DataVector& obs, const Prior& prior,
                            const Simulator& sim, const ProposalKernel& proposal,
                            const DiscrepancyKernel& kernel, RngStream& rng);

/// Runs n_chains independent chains (streams seeded (seed, chain)), each
/// initialized per cfg.init, and returns the post-burn-in, thinned states
/// with unit weights merged in chain order. Entries carry x for D-chains.
WeightedSample run_chain(const McmcConfig& cfg, const Prior& prior, const Simulator& sim,
                         const DataVector& obs);

/// --- Detailed-balance verification (finite models) ---
///
/// A finite model spec: scalar theta grid with prior weights, finite output
/// alphabet, and an explicit likelihood table pi(x | theta).
struct FiniteModelSpec {
    std::vector<double> theta_grid;
    std::vector<double> prior_weights;              // need not be normalized
    std::vector<double> alphabet;                   // output values
    std::vector<std::vector<double>> likelihood;    // [theta][x], rows sum to 1
};

using DenseMatrix = std::vector<std::vector<double>>;

/// Transition matrix of Algorithm C on the theta grid, with the acceptance
/// rate integrated over X' by enumeration. Row/column order follows
/// theta_grid.
DenseMatrix enumerate_chain_c_transition(const FiniteModelSpec& spec, const DiscrepancyKernel& kernel,
                                         const DataVector& obs, const ProposalKernel& proposal);

/// Stationary law targeted by Algorithm C: pi(theta) integral pi_eps(D-x)
/// pi(x|theta) dx, normalized over the grid.
std::vector<double> enumerate_chain_c_stationary(const FiniteModelSpec& spec,
                                                 const DiscrepancyKernel& kernel, const DataVector& obs);

/// Transition matrix of Algorithm D on the joint space; state index is
/// theta_index * alphabet.size() + x_index.
DenseMatrix enumerate_chain_d_transition(const FiniteModelSpec& spec, const DiscrepancyKernel& kernel,
                                         const DataVector& obs, const ProposalKernel& proposal);

/// Joint stationary law pi(theta, x | D) proportional to
/// pi_eps(D-x) pi(x|theta) pi(theta), flattened in the same state order.
std::vector<double> enumerate_chain_d_stationary(const FiniteModelSpec& spec,
                                                 const DiscrepancyKernel& kernel, const DataVector& obs);

/// max over state pairs of |pi(s)p(s,t) - pi(t)p(t,s)| relative to the
/// larger flow; zero-flow pairs contribute zero.
double max_detailed_balance_violation(const DenseMatrix& transition, const std::vector<double>& stationary);

} // namespace abc

#endif // ABC_MCMC_HPP
