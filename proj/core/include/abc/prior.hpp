#ifndef ABC_PRIOR_HPP
#define ABC_PRIOR_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <vector>

#include "abc/random.hpp"
#include "abc/types.hpp"

namespace abc {

/// Per-component support bounds; infinities mark unbounded components.
struct Support {
    std::vector<double> lower;
    std::vector<double> upper;

    bool contains(const ParamVector& theta) const {
        if (theta.dim() != lower.size()) return false;
        for (std::size_t i = 0; i < lower.size(); ++i) {
            if (theta[i] < lower[i] || theta[i] > upper[i]) return false;
        }
        return true;
    }
};

/// Prior distribution pi(theta). log_density returns -infinity exactly
/// outside the support, and draws always lie inside it.
class Prior {
public:
    virtual ~Prior() = default;
    virtual ParamVector sample(RngStream& rng) const = 0;
    virtual double log_density(const ParamVector& theta) const = 0;
    virtual const Support& support() const = 0;
    virtual std::size_t dim() const = 0;

    bool in_support(const ParamVector& theta) const { return support().contains(theta); }
};

/// Independent uniform components on a box.
class UniformBoxPrior final : public Prior {
public:
    UniformBoxPrior(std::vector<double> lo, std::vector<double> hi) {
        if (lo.size() != hi.size() || lo.empty()) {
            throw Error("UniformBoxPrior: bounds must be nonempty and of equal length");
        }
        for (std::size_t i = 0; i < lo.size(); ++i) {
            if (!(lo[i] < hi[i])) throw Error("UniformBoxPrior: lower bound must be below upper");
        }
        support_.lower = std::move(lo);
        support_.upper = std::move(hi);
        log_dens_ = 0.0;
        for (std::size_t i = 0; i < support_.lower.size(); ++i) {
            log_dens_ -= std::log(support_.upper[i] - support_.lower[i]);
        }
    }

    ParamVector sample(RngStream& rng) const override {
        ParamVector theta;
        theta.values.resize(dim());
        for (std::size_t i = 0; i < dim(); ++i) {
            theta.values[i] = rng.uniform(support_.lower[i], support_.upper[i]);
        }
        return theta;
    }

    double log_density(const ParamVector& theta) const override {
        if (!support_.contains(theta)) return -std::numeric_limits<double>::infinity();
        return log_dens_;
    }

    const Support& support() const override { return support_; }
    std::size_t dim() const override { return support_.lower.size(); }

private:
    Support support_;
    double log_dens_ = 0.0;
};

/// Discrete prior over a finite set of scalar parameter values, used by the
/// enumeration oracles. Densities are point masses; values off the grid lie
/// outside the support.
class GridPrior final : public Prior {
public:
    GridPrior(std::vector<double> grid, std::vector<double> weights)
        : grid_(std::move(grid)), weights_(std::move(weights)) {
        if (grid_.empty() || grid_.size() != weights_.size()) {
            throw Error("GridPrior: grid and weights must be nonempty and of equal length");
        }
        total_ = std::accumulate(weights_.begin(), weights_.end(), 0.0);
        if (!(total_ > 0.0)) throw Error("GridPrior: weights must have positive total");
        support_.lower = {*std::min_element(grid_.begin(), grid_.end())};
        support_.upper = {*std::max_element(grid_.begin(), grid_.end())};
    }

    ParamVector sample(RngStream& rng) const override {
        const std::size_t i = rng.categorical(weights_.data(), weights_.size(), total_);
        return ParamVector{{grid_[i]}};
    }

    double log_density(const ParamVector& theta) const override {
        const auto idx = index_of(theta);
        if (!idx) return -std::numeric_limits<double>::infinity();
        return std::log(weights_[*idx] / total_);
    }

    /// Grid index of theta, or nullopt when theta is off the grid.
    std::optional<std::size_t> index_of(const ParamVector& theta) const {
        if (theta.dim() != 1) return std::nullopt;
        for (std::size_t i = 0; i < grid_.size(); ++i) {
            if (grid_[i] == theta[0]) return i;
        }
        return std::nullopt;
    }

    const Support& support() const override { return support_; }
    std::size_t dim() const override { return 1; }
    const std::vector<double>& grid() const { return grid_; }
    std::vector<double> normalized_weights() const {
        std::vector<double> w(weights_);
        for (double& v : w) v /= total_;
        return w;
    }

private:
    std::vector<double> grid_;
    std::vector<double> weights_;
    double total_ = 0.0;
    Support support_;
};

} // namespace abc

#endif // ABC_PRIOR_HPP
