#ifndef ABC_PROPOSAL_HPP
#define ABC_PROPOSAL_HPP

#include <cmath>
#include <limits>
#include <vector>

#include "abc/random.hpp"
#include "abc/types.hpp"

namespace abc {

/// Markov transition kernel q(theta_t, theta'). When `symmetric()` is true
/// the samplers skip the q-ratio in the acceptance probability.
class ProposalKernel {
public:
    virtual ~ProposalKernel() = default;
    virtual ParamVector propose(const ParamVector& current, RngStream& rng) const = 0;
    /// log q(from, to)
    virtual double log_density(const ParamVector& from, const ParamVector& to) const = 0;
    virtual bool symmetric() const = 0;
};

/// Per-component Gaussian random walk with fixed scales.
class GaussianWalkProposal final : public ProposalKernel {
public:
    explicit GaussianWalkProposal(std::vector<double> scales) : scales_(std::move(scales)) {
        for (double s : scales_) {
            if (!(s > 0.0)) throw Error("GaussianWalkProposal: scales must be positive");
        }
    }

    ParamVector propose(const ParamVector& current, RngStream& rng) const override {
        ParamVector next = current;
        for (std::size_t i = 0; i < scales_.size(); ++i) {
            next.values[i] += scales_[i] * rng.normal();
        }
        return next;
    }

    double log_density(const ParamVector& from, const ParamVector& to) const override {
        double lp = 0.0;
        for (std::size_t i = 0; i < scales_.size(); ++i) {
            const double z = (to[i] - from[i]) / scales_[i];
            lp += -0.5 * z * z - std::log(scales_[i]) - 0.5 * log_2pi;
        }
        return lp;
    }

    bool symmetric() const override { return true; }

private:
    static constexpr double log_2pi = 1.8378770664093453;
    std::vector<double> scales_;
};

/// Independent uniform proposal over a finite scalar grid; q(a,b) = 1/K for
/// every pair, hence symmetric. Used with GridPrior models.
class UniformGridProposal final : public ProposalKernel {
public:
    explicit UniformGridProposal(std::vector<double> grid) : grid_(std::move(grid)) {
        if (grid_.empty()) throw Error("UniformGridProposal: empty grid");
    }

    ParamVector propose(const ParamVector&, RngStream& rng) const override {
        const std::size_t i = static_cast<std::size_t>(rng.uniform01() * static_cast<double>(grid_.size()));
        return ParamVector{{grid_[i < grid_.size() ? i : grid_.size() - 1]}};
    }

    double log_density(const ParamVector&, const ParamVector& to) const override {
        for (double g : grid_) {
            if (g == to[0]) return -std::log(static_cast<double>(grid_.size()));
        }
        return -std::numeric_limits<double>::infinity();
    }

    bool symmetric() const override { return true; }

private:
    std::vector<double> grid_;
};

} // namespace abc

#endif // ABC_PROPOSAL_HPP
