#include "abc/mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "abc/rejection.hpp"

namespace abc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_q_ratio(const ProposalKernel& proposal, const ParamVector& from, const ParamVector& to) {
    if (proposal.symmetric()) return 0.0;
    return proposal.log_density(to, from) - proposal.log_density(from, to);
}

DiscrepancyKernel bind_kernel(const DiscrepancyKernel& kernel, const DataVector& obs) {
    if (kernel.metric() == Metric::MaxRelative) return kernel.with_reference(obs.values);
    return kernel;
}

} // namespace

StepResult step_algorithm_c(const ChainState& state, const DataVector& obs, const Prior& prior,
                            const Simulator& sim, const ProposalKernel& proposal,
                            const DiscrepancyKernel& kernel, RngStream& rng) {
    StepResult res{state, false, 0.0, false};
    ParamVector next = proposal.propose(state.theta, rng);
    const double lp_next = prior.log_density(next);
    if (lp_next == -kInf) {
        return res; // auto-rejected; no simulation, no accept draw
    }
    DataVector x = sim.run(next, rng);
    const double log_pe = kernel.log_density(difference(obs, x));
    const double log_c = std::log(kernel.bound());
    if (log_pe > log_c + 1e-12) {
        throw InvalidBoundError("kernel density exceeds bound c in Algorithm C acceptance");
    }
    const double lp_cur = prior.log_density(state.theta);
    const double log_mh = log_q_ratio(proposal, state.theta, next) + lp_next - lp_cur;
    const double log_r = (log_pe - log_c) + std::min(0.0, log_mh);
    const double u = rng.uniform01();
    if (std::isnan(log_r)) {
        res.nonfinite_ratio = true;
        return res;
    }
    res.accept_prob = std::exp(std::min(0.0, log_r));
    if (u < res.accept_prob) {
        res.accepted = true;
        res.state.theta = std::move(next);
    }
    return res;
}

StepResult step_algorithm_d(const ChainState& state, const DataVector& obs, const Prior& prior,
                            const Simulator& sim, const ProposalKernel& proposal,
                            const DiscrepancyKernel& kernel, RngStream& rng) {
    if (!state.x) {
        throw InvalidStateError("Algorithm D requires a current simulated output in the chain state");
    }
    if (state.log_weight_cache == -kInf || std::isnan(state.log_weight_cache)) {
        throw InvalidStateError("Algorithm D cannot move from a state with zero error density");
    }
    StepResult res{state, false, 0.0, false};
    ParamVector next = proposal.propose(state.theta, rng);
    const double lp_next = prior.log_density(next);
    if (lp_next == -kInf) {
        return res;
    }
    DataVector x_next = sim.run(next, rng);
    const double log_pe_next = kernel.log_density(difference(obs, x_next));
    const double lp_cur = prior.log_density(state.theta);
    const double log_ratio =
        log_q_ratio(proposal, state.theta, next) + (log_pe_next + lp_next) - (state.log_weight_cache + lp_cur);
    const double u = rng.uniform01();
    if (std::isnan(log_ratio)) {
        res.nonfinite_ratio = true;
        return res;
    }
    res.accept_prob = std::exp(std::min(0.0, log_ratio));
    if (u < res.accept_prob) {
        res.accepted = true;
        res.state.theta = std::move(next);
        res.state.x = std::move(x_next);
        res.state.log_weight_cache = log_pe_next;
    }
    return res;
}

namespace {

struct ChainResult {
    std::vector<SampleEntry> entries;
    std::uint64_t accepted = 0;
    std::uint64_t nonfinite = 0;
};

ChainState initialize_chain(const McmcConfig& cfg, const Prior& prior, const Simulator& sim,
                            const DataVector& obs, const DiscrepancyKernel& kernel, RngStream& rng) {
    const bool is_d = cfg.algorithm == McmcAlgorithm::D;
    if (cfg.init == ChainInit::Explicit) {
        if (!cfg.init_state) throw Error("mcmc: explicit init requested but init_state is empty");
        ChainState s = *cfg.init_state;
        if (!prior.in_support(s.theta)) throw InvalidStateError("mcmc: explicit init theta outside prior support");
        if (is_d) {
            if (!s.x) throw InvalidStateError("mcmc: Algorithm D init needs a simulated output");
            // Never trust a caller-supplied cache.
            s.log_weight_cache = kernel.log_density(difference(obs, *s.x));
            if (s.log_weight_cache == -kInf) {
                throw InvalidStateError("mcmc: Algorithm D init state has zero error density");
            }
        }
        return s;
    }
    if (cfg.init == ChainInit::Rejection || is_d) {
        auto drawn = draw_single_accepted(prior, sim, obs, kernel, nullptr, rng, cfg.init_budget);
        if (drawn) {
            ChainState s;
            s.theta = std::move(drawn->first);
            if (is_d) {
                s.x = std::move(drawn->second);
                s.log_weight_cache = kernel.log_density(difference(obs, *s.x));
            }
            return s;
        }
        if (is_d) {
            throw InitFailureError("mcmc: rejection initialization exhausted its budget (" +
                                   std::to_string(cfg.init_budget) + " proposals)");
        }
        // Algorithm C can start anywhere in the support; fall through.
    }
    ChainState s;
    s.theta = prior.sample(rng);
    return s;
}

ChainResult run_one_chain(const McmcConfig& cfg, const Prior& prior, const Simulator& sim,
                          const DataVector& obs, const DiscrepancyKernel& kernel, unsigned chain_index) {
    RngStream rng(cfg.seed, chain_index);
    ChainState state = initialize_chain(cfg, prior, sim, obs, kernel, rng);
    ChainResult out;
    const bool is_d = cfg.algorithm == McmcAlgorithm::D;
    for (std::uint64_t t = 1; t <= cfg.n_steps; ++t) {
        StepResult r = is_d ? step_algorithm_d(state, obs, prior, sim, *cfg.proposal, kernel, rng)
                            : step_algorithm_c(state, obs, prior, sim, *cfg.proposal, kernel, rng);
        state = std::move(r.state);
        if (r.accepted) ++out.accepted;
        if (r.nonfinite_ratio) ++out.nonfinite;
        if (t > cfg.burn_in && (t - cfg.burn_in - 1) % cfg.thin == 0) {
            SampleEntry e;
            e.theta = state.theta;
            e.weight = 1.0;
            if (is_d) e.x = state.x;
            out.entries.push_back(std::move(e));
        }
    }
    return out;
}

} // namespace

WeightedSample run_chain(const McmcConfig& cfg, const Prior& prior, const Simulator& sim,
                         const DataVector& obs) {
    if (cfg.n_steps == 0) throw Error("mcmc: n_steps must be positive");
    if (cfg.burn_in >= cfg.n_steps) throw Error("mcmc: burn_in must be smaller than n_steps");
    if (cfg.thin == 0) throw Error("mcmc: thin must be >= 1");
    if (cfg.n_chains == 0) throw Error("mcmc: n_chains must be >= 1");
    if (!cfg.proposal) throw Error("mcmc: proposal kernel required");

    const DiscrepancyKernel kernel = bind_kernel(cfg.kernel, obs);
    if (kernel.dim() != obs.dim()) {
        throw DimensionMismatchError("kernel dimension does not match observation dimension");
    }

    std::vector<ChainResult> results(cfg.n_chains);
    std::vector<std::exception_ptr> failures(cfg.n_chains);
    auto work = [&](unsigned c) {
        try {
            results[c] = run_one_chain(cfg, prior, sim, obs, kernel, c);
        } catch (...) {
            failures[c] = std::current_exception();
        }
    };
    if (cfg.n_chains == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned c = 0; c < cfg.n_chains; ++c) pool.emplace_back(work, c);
        for (auto& t : pool) t.join();
    }
    for (auto& f : failures) {
        if (f) std::rethrow_exception(f);
    }

    WeightedSample sample;
    sample.meta.seed = cfg.seed;
    sample.meta.kernel = kernel.describe();
    sample.meta.algorithm = cfg.algorithm == McmcAlgorithm::D ? "mcmc-d" : "mcmc-c";
    sample.meta.total_proposals = cfg.n_steps * cfg.n_chains;
    std::uint64_t accepted = 0;
    for (auto& r : results) {
        accepted += r.accepted;
        sample.meta.nonfinite_ratio_rejects += r.nonfinite;
        sample.meta.per_chain_acceptance.push_back(static_cast<double>(r.accepted) /
                                                   static_cast<double>(cfg.n_steps));
        std::move(r.entries.begin(), r.entries.end(), std::back_inserter(sample.entries));
    }
    sample.meta.acceptance_rate =
        static_cast<double>(accepted) / static_cast<double>(sample.meta.total_proposals);
    return sample;
}

// --- enumeration utilities ---

namespace {

void validate_spec(const FiniteModelSpec& spec) {
    const std::size_t K = spec.theta_grid.size();
    const std::size_t M = spec.alphabet.size();
    if (K == 0 || M == 0 || spec.prior_weights.size() != K || spec.likelihood.size() != K) {
        throw Error("finite model spec: inconsistent sizes");
    }
    for (const auto& row : spec.likelihood) {
        if (row.size() != M) throw Error("finite model spec: likelihood row length mismatch");
        double s = 0.0;
        for (double v : row) s += v;
        if (std::abs(s - 1.0) > 1e-12) {
            throw Error("finite model spec: likelihood row does not sum to 1");
        }
    }
}

std::vector<double> kernel_values(const FiniteModelSpec& spec, const DiscrepancyKernel& kernel,
                                  const DataVector& obs) {
    std::vector<double> pe(spec.alphabet.size());
    for (std::size_t a = 0; a < spec.alphabet.size(); ++a) {
        DataVector x{{spec.alphabet[a]}};
        x.is_summary = obs.is_summary;
        pe[a] = kernel.density(difference(obs, x));
    }
    return pe;
}

} // namespace

std::vector<double> enumerate_chain_c_stationary(const FiniteModelSpec& spec,
                                                 const DiscrepancyKernel& kernel, const DataVector& obs) {
    validate_spec(spec);
    const auto pe = kernel_values(spec, kernel, obs);
    std::vector<double> pi(spec.theta_grid.size(), 0.0);
    double z = 0.0;
    for (std::size_t i = 0; i < pi.size(); ++i) {
        double lik = 0.0;
        for (std::size_t a = 0; a < pe.size(); ++a) lik += pe[a] * spec.likelihood[i][a];
        pi[i] = spec.prior_weights[i] * lik;
        z += pi[i];
    }
    if (!(z > 0.0)) throw Error("enumerate_chain_c_stationary: zero normalizing constant");
    for (double& v : pi) v /= z;
    return pi;
}

DenseMatrix enumerate_chain_c_transition(const FiniteModelSpec& spec, const DiscrepancyKernel& kernel,
                                         const DataVector& obs, const ProposalKernel& proposal) {
    validate_spec(spec);
    const std::size_t K = spec.theta_grid.size();
    const auto pe = kernel_values(spec, kernel, obs);
    const double c = kernel.bound();

    double prior_total = 0.0;
    for (double w : spec.prior_weights) prior_total += w;

    DenseMatrix P(K, std::vector<double>(K, 0.0));
    for (std::size_t i = 0; i < K; ++i) {
        const ParamVector ti{{spec.theta_grid[i]}};
        double off_diag = 0.0;
        for (std::size_t j = 0; j < K; ++j) {
            if (j == i) continue;
            const ParamVector tj{{spec.theta_grid[j]}};
            const double q_ij = std::exp(proposal.log_density(ti, tj));
            const double q_ji = std::exp(proposal.log_density(tj, ti));
            if (q_ij == 0.0) continue; // unreachable move
            const double mh =
                std::min(1.0, (q_ji * spec.prior_weights[j] / prior_total) /
                                  (q_ij * spec.prior_weights[i] / prior_total));
            // Acceptance rate integrated over X' ~ pi(. | theta_j).
            double accept = 0.0;
            for (std::size_t a = 0; a < pe.size(); ++a) {
                accept += (pe[a] / c) * mh * spec.likelihood[j][a];
            }
            P[i][j] = q_ij * accept;
            off_diag += P[i][j];
        }
        // Self-transition absorbs rejected moves and any q(i,i) mass.
        P[i][i] = 1.0 - off_diag;
    }
    return P;
}

std::vector<double> enumerate_chain_d_stationary(const FiniteModelSpec& spec,
                                                 const DiscrepancyKernel& kernel, const DataVector& obs) {
    validate_spec(spec);
    const std::size_t K = spec.theta_grid.size();
    const std::size_t M = spec.alphabet.size();
    const auto pe = kernel_values(spec, kernel, obs);
    std::vector<double> pi(K * M, 0.0);
    double z = 0.0;
    for (std::size_t i = 0; i < K; ++i) {
        for (std::size_t a = 0; a < M; ++a) {
            pi[i * M + a] = pe[a] * spec.likelihood[i][a] * spec.prior_weights[i];
            z += pi[i * M + a];
        }
    }
    if (!(z > 0.0)) throw Error("enumerate_chain_d_stationary: zero normalizing constant");
    for (double& v : pi) v /= z;
    return pi;
}

DenseMatrix enumerate_chain_d_transition(const FiniteModelSpec& spec, const DiscrepancyKernel& kernel,
                                         const DataVector& obs, const ProposalKernel& proposal) {
    validate_spec(spec);
    const std::size_t K = spec.theta_grid.size();
    const std::size_t M = spec.alphabet.size();
    const auto pe = kernel_values(spec, kernel, obs);

    DenseMatrix P(K * M, std::vector<double>(K * M, 0.0));
    for (std::size_t i = 0; i < K; ++i) {
        const ParamVector ti{{spec.theta_grid[i]}};
        for (std::size_t a = 0; a < M; ++a) {
            const std::size_t s = i * M + a;
            if (pe[a] == 0.0) {
                P[s][s] = 1.0; // unreachable state; defined for completeness
                continue;
            }
            double off_diag = 0.0;
            for (std::size_t j = 0; j < K; ++j) {
                const ParamVector tj{{spec.theta_grid[j]}};
                const double q_ij = std::exp(proposal.log_density(ti, tj));
                const double q_ji = std::exp(proposal.log_density(tj, ti));
                for (std::size_t b = 0; b < M; ++b) {
                    const std::size_t t = j * M + b;
                    if (t == s) continue;
                    if (q_ij == 0.0 || pe[b] == 0.0) continue; // unreachable move
                    const double ratio = (pe[b] * q_ji * spec.prior_weights[j]) /
                                         (pe[a] * q_ij * spec.prior_weights[i]);
                    P[s][t] = q_ij * spec.likelihood[j][b] * std::min(1.0, ratio);
                    off_diag += P[s][t];
                }
            }
            P[s][s] = 1.0 - off_diag;
        }
    }
    return P;
}

double max_detailed_balance_violation(const DenseMatrix& transition, const std::vector<double>& stationary) {
    const std::size_t n = transition.size();
    if (stationary.size() != n) throw Error("detailed balance: size mismatch");
    double worst = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t t = s + 1; t < n; ++t) {
            const double flow_st = stationary[s] * transition[s][t];
            const double flow_ts = stationary[t] * transition[t][s];
            const double scale = std::max(flow_st, flow_ts);
            if (scale == 0.0) continue;
            worst = std::max(worst, std::abs(flow_st - flow_ts) / scale);
        }
    }
    return worst;
}

} // namespace abc
