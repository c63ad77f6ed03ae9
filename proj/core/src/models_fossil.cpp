#include "abc/models/fossil.hpp"

#include <cmath>

namespace abc::models {

namespace {

// Binomial(n, alpha) mass at d, with the alpha = 0/1 edges handled exactly.
double binomial_pmf(double n, double d, double alpha) {
    if (d < 0.0 || d > n) return 0.0;
    if (alpha <= 0.0) return d == 0.0 ? 1.0 : 0.0;
    if (alpha >= 1.0) return d == n ? 1.0 : 0.0;
    const double log_choose =
        std::lgamma(n + 1.0) - std::lgamma(d + 1.0) - std::lgamma(n - d + 1.0);
    return std::exp(log_choose + d * std::log(alpha) + (n - d) * std::log1p(-alpha));
}

} // namespace

FossilSimResult simulate_fossil_counts(double lambda, double mu, double tau,
                                       const std::vector<double>& epoch_boundaries,
                                       const std::vector<double>& rate_multipliers, RngStream& rng) {
    if (!(tau > 0.0)) throw Error("fossil: tau must be positive");
    const std::size_t k = epoch_boundaries.size();
    if (k == 0) throw Error("fossil: at least one epoch boundary required");
    for (std::size_t j = 0; j < k; ++j) {
        if (!(epoch_boundaries[j] < 0.0)) throw Error("fossil: epoch boundaries must be negative times");
        if (j > 0 && !(epoch_boundaries[j - 1] < epoch_boundaries[j])) {
            throw Error("fossil: epoch boundaries must be strictly ascending");
        }
    }
    if (!rate_multipliers.empty() && rate_multipliers.size() != k) {
        throw Error("fossil: one rate multiplier per epoch expected");
    }

    FossilSimResult res;
    res.counts.assign(k, 0.0);

    const double root = -tau;
    double now = root;
    std::uint64_t alive = 1;

    // March segment by segment: epoch j spans [boundaries[j], end_j) where
    // end_j is the next boundary or 0. Time before the first boundary (when
    // the root predates it) runs at the base rate and records no counts.
    for (std::size_t j = 0; j <= k; ++j) {
        const bool pre_epoch = j == 0;
        const double seg_start = pre_epoch ? root : epoch_boundaries[j - 1];
        const double seg_end = j < k ? epoch_boundaries[j] : 0.0;
        if (seg_end <= now) continue; // segment entirely before the root's birth
        const double start = std::max(now, seg_start);

        const double mult = (pre_epoch || rate_multipliers.empty()) ? 1.0 : rate_multipliers[j - 1];
        const double birth_rate = lambda * mult;

        std::uint64_t births = 0;
        const std::uint64_t alive_at_entry = alive;
        double t = start;
        while (alive > 0) {
            const double total_rate = static_cast<double>(alive) * (birth_rate + mu);
            if (!(total_rate > 0.0)) break;
            const double dt = rng.exponential(total_rate);
            if (t + dt >= seg_end) break;
            t += dt;
            if (rng.uniform01() < birth_rate / (birth_rate + mu)) {
                ++alive;
                ++births;
            } else {
                --alive;
            }
        }
        if (!pre_epoch) {
            res.counts[j - 1] = static_cast<double>(alive_at_entry + births);
        }
        now = seg_end;
        if (alive == 0) {
            res.extinct = true;
            // Later epochs keep count zero; nothing exists to record.
            now = 0.0;
            break;
        }
    }
    return res;
}

double fossil_acceptance_prob(const std::vector<double>& branch_counts,
                              const std::vector<double>& observed_counts, double alpha) {
    if (branch_counts.size() != observed_counts.size()) {
        throw DimensionMismatchError("fossil: branch and fossil count vectors differ in length");
    }
    if (alpha < 0.0 || alpha > 1.0) throw Error("fossil: alpha must lie in [0, 1]");
    double p = 1.0;
    for (std::size_t j = 0; j < branch_counts.size(); ++j) {
        const double n = branch_counts[j];
        const double d = observed_counts[j];
        if (n != std::nearbyint(n) || d != std::nearbyint(d) || n < 0.0 || d < 0.0) {
            throw Error("fossil: counts must be nonnegative integers");
        }
        p *= binomial_pmf(n, d, alpha);
        if (p == 0.0) break;
    }
    return p;
}

FossilModel::FossilModel(FossilConfig cfg, std::vector<double> lambda_grid)
    : cfg_(std::move(cfg)),
      prior_(lambda_grid, std::vector<double>(lambda_grid.size(), 1.0)),
      proposal_(lambda_grid),
      sim_(std::make_unique<TreeSimulator>(this)) {
    if (cfg_.observed_counts.size() != cfg_.epoch_boundaries.size()) {
        throw DimensionMismatchError("fossil: one observed count per epoch required");
    }
    observation().check_integrality();
}

DataVector FossilModel::observation() const {
    DataVector d;
    d.values = cfg_.observed_counts;
    d.integral_components.resize(d.dim());
    for (std::size_t i = 0; i < d.dim(); ++i) d.integral_components[i] = i;
    return d;
}

double FossilModel::accept_prob(const DataVector& obs, const DataVector& x) const {
    return fossil_acceptance_prob(x.values, obs.values, cfg_.alpha);
}

DataVector FossilModel::TreeSimulator::run(const ParamVector& theta, RngStream& rng) const {
    const auto& cfg = owner_->cfg_;
    const FossilSimResult res = simulate_fossil_counts(theta[0], cfg.mu, cfg.tau, cfg.epoch_boundaries,
                                                       cfg.rate_multipliers, rng);
    DataVector out;
    out.values = res.counts;
    return out;
}

} // namespace abc::models
