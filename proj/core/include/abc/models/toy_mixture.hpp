#ifndef ABC_MODELS_TOY_MIXTURE_HPP
#define ABC_MODELS_TOY_MIXTURE_HPP

#include "abc/prior.hpp"
#include "abc/simulator.hpp"

namespace abc::models {

/// Scalar Gaussian-mixture toy: eta(theta) ~ 1/2 N(theta, 1) +
/// 1/2 N(theta, 1/100) with theta ~ U[-10, 10] and observation D = 0.
/// Both error-model posteriors have closed forms, so the model doubles as
/// the engine's main analytic oracle.
class ToyMixtureModel {
public:
    ToyMixtureModel() : prior_({-10.0}, {10.0}) {}

    const UniformBoxPrior& prior() const { return prior_; }
    const Simulator& simulator() const { return sim_; }
    DataVector observation() const { return DataVector{{0.0}}; }

private:
    class MixtureSimulator final : public Simulator {
    public:
        DataVector run(const ParamVector& theta, RngStream& rng) const override {
            // Component choice first, then the noise draw.
            const double sd = rng.uniform01() < 0.5 ? 1.0 : 0.1;
            return DataVector{{theta[0] + sd * rng.normal()}};
        }
        std::size_t output_dim() const override { return 1; }
    };

    UniformBoxPrior prior_;
    MixtureSimulator sim_;
};

/// Unnormalized posterior density of theta for uniform measurement error
/// U[-delta, delta] on D = 0: the acceptance probability of the hard cutoff
/// written through the mixture CDF,
///   1/2 {Phi(delta-theta) - Phi(-delta-theta)}
/// + 1/2 {Phi(10(delta-theta)) - Phi(10(-delta-theta))},
/// zero outside the prior box [-10, 10].
double toy_posterior_uniform_error(double theta, double delta);

/// Unnormalized posterior density of theta for Gaussian error
/// N(0, delta^2/3) on D = 0:
///   1/2 phi(theta; 0, 1 + delta^2/3) + 1/2 phi(theta; 0, 1/100 + delta^2/3),
/// truncated to [-10, 10]. The variance matches a U[-delta, delta] error.
double toy_posterior_gaussian_error(double theta, double delta);

} // namespace abc::models

#endif // ABC_MODELS_TOY_MIXTURE_HPP
