#ifndef ABC_ESTIMATORS_HPP
#define ABC_ESTIMATORS_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "abc/kernels.hpp"
#include "abc/prior.hpp"
#include "abc/sample.hpp"
#include "abc/simulator.hpp"

namespace abc {

/// Self-normalized weighted mean sum f(theta_i) w_i / sum w_i. Invariant
/// under uniform rescaling of the weights. Throws AllWeightsZeroError when
/// no posterior mass was captured.
std::vector<double> weighted_expectation(const WeightedSample& sample,
                                         const std::function<std::vector<double>(const ParamVector&)>& f);

double weighted_expectation_scalar(const WeightedSample& sample,
                                   const std::function<double(const ParamVector&)>& f);

/// Delta-method Monte Carlo standard error of the self-normalized mean:
/// sqrt(sum w_i^2 (f_i - mu)^2) / sum w_i.
double weighted_expectation_std_error(const WeightedSample& sample,
                                      const std::function<double(const ParamVector&)>& f);

/// Weight-degeneracy diagnostic sum w / max w, in [1, n].
double effective_sample_size(const WeightedSample& sample);

/// Nested Monte Carlo estimate of the model evidence pi(D).
struct EvidenceEstimate {
    double value = 0.0;      // (1/n) sum_i (1/m) sum_j pi_eps(D - X_i^j)
    double std_error = 0.0;  // outer-level sample standard error of the n inner means
    std::uint64_t n = 0;
    std::uint64_t m = 0;
};

/// theta_1..theta_n from the prior, X_i^1..X_i^m from eta(theta_i);
/// consistent for the evidence of the error-augmented model as n,m grow.
/// Outer draws are split in contiguous blocks over `workers` streams seeded
/// (seed, worker); the reduction runs in outer-index order, so the result is
/// deterministic for a given (seed, workers) pair. Zero is a valid estimate.
EvidenceEstimate estimate_evidence(const Prior& prior, const Simulator& sim, const DataVector& obs,
                                   const DiscrepancyKernel& kernel, std::uint64_t n, std::uint64_t m,
                                   std::uint64_t seed, unsigned workers = 1);

struct BayesFactor {
    double value = 0.0;
    double std_error = 0.0; // first-order propagation of the two estimate errors
};

/// e1.value / e2.value. Throws ZeroDenominatorError when e2.value == 0.
BayesFactor bayes_factor(const EvidenceEstimate& e1, const EvidenceEstimate& e2);

} // namespace abc

#endif // ABC_ESTIMATORS_HPP
