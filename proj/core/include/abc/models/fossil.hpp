#ifndef ABC_MODELS_FOSSIL_HPP
#define ABC_MODELS_FOSSIL_HPP

#include <memory>
#include <vector>

#include "abc/prior.hpp"
#include "abc/proposal.hpp"
#include "abc/simulator.hpp"

namespace abc::models {

/// Fossil-record branching process. A tree is rooted at time -tau and grown
/// forward to the present t = 0 as a birth-death process with per-branch
/// birth rate lambda (optionally rescaled per epoch) and death rate mu.
/// Epoch boundaries are negative times in ascending order; epoch j is the
/// interval [boundaries[j], boundaries[j+1]) with the last epoch ending at
/// 0, so index 0 is the oldest epoch. N_j counts every branch alive at any
/// point during epoch j. Observed fossil counts are thinned branch counts,
/// D_j ~ Binomial(N_j, alpha).
struct FossilConfig {
    double lambda = 1.0;
    double mu = 0.0;
    double tau = 1.0;                      // tree depth; root at time -tau
    std::vector<double> epoch_boundaries;  // ascending, all < 0
    std::vector<double> rate_multipliers;  // per epoch; empty means all 1
    double alpha = 0.5;                    // per-branch preservation probability
    std::vector<double> observed_counts;   // D_j, integral and >= 0
};

struct FossilSimResult {
    std::vector<double> counts; // N_j per epoch
    bool extinct = false;       // tree died before reaching t = 0; counts still valid
};

/// One realization of the branching process, reduced to per-epoch branch
/// counts. Only population-size dynamics are simulated: N_j equals the
/// number of branches alive when epoch j starts plus births during it.
FossilSimResult simulate_fossil_counts(double lambda, double mu, double tau,
                                       const std::vector<double>& epoch_boundaries,
                                       const std::vector<double>& rate_multipliers, RngStream& rng);

/// prod_j C(N_j, D_j) alpha^D_j (1-alpha)^(N_j - D_j); zero whenever some
/// D_j > N_j. Used as the exact acceptance probability: rejection with this
/// thinning samples the true posterior with no error assumption.
double fossil_acceptance_prob(const std::vector<double>& branch_counts,
                              const std::vector<double>& observed_counts, double alpha);

/// Fossil model with unknown lambda on a finite grid (uniform prior);
/// tau, mu, alpha and the epoch layout are fixed by the config.
class FossilModel {
public:
    FossilModel(FossilConfig cfg, std::vector<double> lambda_grid);

    // The owned simulator points back at this object.
    FossilModel(const FossilModel&) = delete;
    FossilModel& operator=(const FossilModel&) = delete;

    const FossilConfig& config() const { return cfg_; }
    const GridPrior& prior() const { return prior_; }
    const Simulator& simulator() const { return *sim_; }
    const UniformGridProposal& grid_proposal() const { return proposal_; }

    /// Observed counts as a DataVector with integrality flags.
    DataVector observation() const;

    /// Acceptance rule for run_rejection_with_rule.
    double accept_prob(const DataVector& obs, const DataVector& x) const;

private:
    class TreeSimulator final : public Simulator {
    public:
        explicit TreeSimulator(const FossilModel* owner) : owner_(owner) {}
        DataVector run(const ParamVector& theta, RngStream& rng) const override;
        std::size_t output_dim() const override { return owner_->cfg_.epoch_boundaries.size(); }

    private:
        const FossilModel* owner_;
    };

    FossilConfig cfg_;
    GridPrior prior_;
    UniformGridProposal proposal_;
    std::unique_ptr<TreeSimulator> sim_;
};

} // namespace abc::models

#endif // ABC_MODELS_FOSSIL_HPP
