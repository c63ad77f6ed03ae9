#ifndef ABC_MODELS_DISCRETE_HPP
#define ABC_MODELS_DISCRETE_HPP

#include <memory>
#include <vector>

#include "abc/kernels.hpp"
#include "abc/mcmc.hpp"
#include "abc/prior.hpp"
#include "abc/simulator.hpp"

namespace abc::models {

/// Finite parameter grid x finite output alphabet with an explicit
/// likelihood table: every posterior, evidence and transition matrix is
/// enumerable in microseconds, which makes this the exactness oracle for
/// the samplers.
class DiscreteOracleModel {
public:
    /// likelihood rows must each sum to 1 within 1e-12.
    DiscreteOracleModel(std::vector<double> theta_grid, std::vector<double> prior_weights,
                        std::vector<double> alphabet, std::vector<std::vector<double>> likelihood);

    explicit DiscreteOracleModel(FiniteModelSpec spec)
        : DiscreteOracleModel(std::move(spec.theta_grid), std::move(spec.prior_weights),
                              std::move(spec.alphabet), std::move(spec.likelihood)) {}

    // The owned simulator points back at this object.
    DiscreteOracleModel(const DiscreteOracleModel&) = delete;
    DiscreteOracleModel& operator=(const DiscreteOracleModel&) = delete;

    /// 5 grid points x 8 outputs with a randomized-but-seeded table: small
    /// enough for exact enumeration, asymmetric enough to catch bias.
    static FiniteModelSpec make_default_spec(std::uint64_t table_seed = 1234);
    static DiscreteOracleModel make_default(std::uint64_t table_seed = 1234);

    const GridPrior& prior() const { return prior_; }
    const Simulator& simulator() const { return *sim_; }
    const UniformGridProposal& grid_proposal() const { return proposal_; }

    const std::vector<double>& theta_grid() const { return spec_.theta_grid; }
    const std::vector<double>& alphabet() const { return spec_.alphabet; }
    const FiniteModelSpec& spec() const { return spec_; }

    /// Default observation: the first alphabet value.
    DataVector observation(std::size_t alphabet_index = 0) const;

    /// Enumerated pi(theta | accepted) proportional to
    /// pi(theta) sum_x pi_eps(D - x) pi(x | theta), in grid order.
    std::vector<double> posterior_theta(const DataVector& obs, const DiscrepancyKernel& kernel) const;

    /// Enumerated joint pi(theta, x | D), flattened theta-major.
    std::vector<double> joint_posterior(const DataVector& obs, const DiscrepancyKernel& kernel) const;

    /// Enumerated evidence sum_theta pi(theta) sum_x pi_eps(D - x) pi(x | theta).
    double evidence(const DataVector& obs, const DiscrepancyKernel& kernel) const;

private:
    class TableSimulator final : public Simulator {
    public:
        TableSimulator(const DiscreteOracleModel* owner) : owner_(owner) {}
        DataVector run(const ParamVector& theta, RngStream& rng) const override;
        std::size_t output_dim() const override { return 1; }

    private:
        const DiscreteOracleModel* owner_;
    };

    FiniteModelSpec spec_;
    GridPrior prior_;
    UniformGridProposal proposal_;
    std::unique_ptr<TableSimulator> sim_;
};

} // namespace abc::models

#endif // ABC_MODELS_DISCRETE_HPP
