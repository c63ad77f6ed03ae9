#ifndef ABC_KERNELS_HPP
#define ABC_KERNELS_HPP

#include <string>
#include <vector>

#include "abc/random.hpp"
#include "abc/types.hpp"

namespace abc {

enum class KernelFamily { UniformBall, Epanechnikov, Gaussian, Product };

/// Distance reducing a difference vector to a scalar r >= 0.
/// MaxRelative needs a reference vector (the observation); see
/// DiscrepancyKernel::with_reference.
enum class Metric { Euclidean, MaxComponent, MaxRelative };

std::string to_string(KernelFamily f);
std::string to_string(Metric m);

/// max_i |d_i - x_i| / |d_i|. Thresholding at delta gives the
/// per-coordinate relative-error box around d.
double max_relative_error_metric(const DataVector& d, const DataVector& x);

/// The acceptance density pi_eps: the distribution assumed for the
/// model/measurement error, evaluated on differences D - X. Doubles as the
/// probabilistic acceptance rule through density/c with c >= sup density.
/// Immutable; freely shareable across workers.
class DiscrepancyKernel {
public:
    static DiscrepancyKernel uniform_ball(double delta, Metric metric = Metric::Euclidean,
                                          std::size_t dim = 1);
    static DiscrepancyKernel epanechnikov(double delta, Metric metric = Metric::Euclidean,
                                          std::size_t dim = 1);
    static DiscrepancyKernel gaussian(double sigma);
    static DiscrepancyKernel gaussian(std::vector<double> sigmas);
    /// Children consume consecutive components of the difference vector.
    static DiscrepancyKernel product(std::vector<DiscrepancyKernel> children);

    /// Copy with the reference vector the MaxRelative metric divides by.
    /// Every component must be nonzero.
    DiscrepancyKernel with_reference(std::vector<double> reference) const;

    /// Copy with an explicit normalizing bound. The bound is trusted as
    /// given; acceptance_prob raises InvalidBoundError if an evaluation
    /// later exceeds it.
    DiscrepancyKernel with_bound(double c) const;

    KernelFamily family() const { return family_; }
    Metric metric() const { return metric_; }
    std::size_t dim() const { return dim_; }
    double delta() const { return delta_; }
    /// Normalizing bound c; defaults to pi_eps(0).
    double bound() const { return c_; }
    const std::vector<DiscrepancyKernel>& children() const { return children_; }

    /// pi_eps evaluated at the difference. Values below 1e-300 are clamped
    /// to zero in linear space; use log_density for ratios.
    double density(const DataVector& diff) const;
    double log_density(const DataVector& diff) const;

    /// density(diff) / c, the Algorithm B acceptance probability. For
    /// UniformBall this is exactly the 0-1 indicator of Algorithm A.
    double acceptance_prob(const DataVector& diff) const;

    /// Variance of one draw from the normalized kernel: delta^2/3 for
    /// UniformBall, delta^2/5 for Epanechnikov, sigma^2 for Gaussian.
    /// Scalar families only; Product reports per-child via error_variances.
    double error_variance() const;
    std::vector<double> error_variances() const;

    /// One draw from the normalized error distribution (scalar families).
    double sample_error(RngStream& rng) const;

    std::string describe() const;

private:
    DiscrepancyKernel() = default;

    double reduce(const DataVector& diff) const;
    double metric_scale(std::size_t i) const; // per-component length unit
    void check_dim(const DataVector& diff) const;

    KernelFamily family_ = KernelFamily::UniformBall;
    Metric metric_ = Metric::Euclidean;
    std::size_t dim_ = 1;
    double delta_ = 1.0;               // tolerance (UniformBall/Epanechnikov)
    std::vector<double> sigmas_;       // Gaussian scales, one per component
    std::vector<double> reference_;    // MaxRelative divisors
    double c_ = 0.0;                   // normalizing bound
    double norm_lin_ = 1.0;            // linear-space normalizing constant
    double log_norm_ = 0.0;            // log of the normalizing constant
    std::vector<DiscrepancyKernel> children_;
};

} // namespace abc

#endif // ABC_KERNELS_HPP
