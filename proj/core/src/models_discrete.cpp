#include "abc/models/discrete.hpp"

#include <cmath>

namespace abc::models {

DiscreteOracleModel::DiscreteOracleModel(std::vector<double> theta_grid, std::vector<double> prior_weights,
                                         std::vector<double> alphabet,
                                         std::vector<std::vector<double>> likelihood)
    : spec_{std::move(theta_grid), std::move(prior_weights), std::move(alphabet), std::move(likelihood)},
      prior_(spec_.theta_grid, spec_.prior_weights),
      proposal_(spec_.theta_grid),
      sim_(std::make_unique<TableSimulator>(this)) {
    const std::size_t K = spec_.theta_grid.size();
    const std::size_t M = spec_.alphabet.size();
    if (spec_.likelihood.size() != K) throw Error("discrete model: one likelihood row per grid point required");
    for (const auto& row : spec_.likelihood) {
        if (row.size() != M) throw Error("discrete model: likelihood row length mismatch");
        double s = 0.0;
        for (double v : row) {
            if (v < 0.0) throw Error("discrete model: negative likelihood entry");
            s += v;
        }
        if (std::abs(s - 1.0) > 1e-12) throw Error("discrete model: likelihood row must sum to 1 within 1e-12");
    }
}

FiniteModelSpec DiscreteOracleModel::make_default_spec(std::uint64_t table_seed) {
    const std::size_t K = 5;
    const std::size_t M = 8;
    FiniteModelSpec spec;
    spec.theta_grid.resize(K);
    for (std::size_t i = 0; i < K; ++i) spec.theta_grid[i] = static_cast<double>(i);
    spec.prior_weights = {1.0, 2.0, 1.5, 0.5, 1.0};

    spec.alphabet.resize(M);
    for (std::size_t a = 0; a < M; ++a) spec.alphabet[a] = static_cast<double>(a) * 0.5; // 0, 0.5, ..., 3.5

    RngStream rng(table_seed, 0);
    spec.likelihood.assign(K, std::vector<double>(M));
    for (std::size_t i = 0; i < K; ++i) {
        double s = 0.0;
        for (std::size_t a = 0; a < M; ++a) {
            spec.likelihood[i][a] = 0.05 + rng.uniform01();
            s += spec.likelihood[i][a];
        }
        for (std::size_t a = 0; a < M; ++a) spec.likelihood[i][a] /= s;
    }
    return spec;
}

DiscreteOracleModel DiscreteOracleModel::make_default(std::uint64_t table_seed) {
    return DiscreteOracleModel(make_default_spec(table_seed));
}

DataVector DiscreteOracleModel::TableSimulator::run(const ParamVector& theta, RngStream& rng) const {
    const auto idx = owner_->prior_.index_of(theta);
    if (!idx) throw Error("discrete model: theta is not a grid point");
    const auto& row = owner_->spec_.likelihood[*idx];
    const std::size_t a = rng.categorical(row.data(), row.size(), 1.0);
    return DataVector{{owner_->spec_.alphabet[a]}};
}

DataVector DiscreteOracleModel::observation(std::size_t alphabet_index) const {
    return DataVector{{spec_.alphabet.at(alphabet_index)}};
}

std::vector<double> DiscreteOracleModel::posterior_theta(const DataVector& obs,
                                                         const DiscrepancyKernel& kernel) const {
    return enumerate_chain_c_stationary(spec_, kernel, obs);
}

std::vector<double> DiscreteOracleModel::joint_posterior(const DataVector& obs,
                                                         const DiscrepancyKernel& kernel) const {
    return enumerate_chain_d_stationary(spec_, kernel, obs);
}

double DiscreteOracleModel::evidence(const DataVector& obs, const DiscrepancyKernel& kernel) const {
    const std::size_t K = spec_.theta_grid.size();
    double prior_total = 0.0;
    for (double w : spec_.prior_weights) prior_total += w;
    double z = 0.0;
    for (std::size_t i = 0; i < K; ++i) {
        double lik = 0.0;
        for (std::size_t a = 0; a < spec_.alphabet.size(); ++a) {
            DataVector x{{spec_.alphabet[a]}};
            x.is_summary = obs.is_summary;
            lik += kernel.density(difference(obs, x)) * spec_.likelihood[i][a];
        }
        z += spec_.prior_weights[i] / prior_total * lik;
    }
    return z;
}

} // namespace abc::models
