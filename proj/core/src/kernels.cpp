#include "abc/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace abc {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLog2Pi = 1.8378770664093453;
constexpr double kLinearClamp = 1e-300;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Volume of the Euclidean ball of radius delta in d dimensions, via the
// recurrence U_d = U_{d-2} * 2 pi / d. Exact for d = 1 (2 delta), which the
// scalar exact-value contracts rely on.
double euclidean_ball_volume(std::size_t d, double delta) {
    double unit = d % 2 == 0 ? 1.0 : 2.0;
    for (std::size_t k = d % 2 == 0 ? 2 : 3; k <= d; k += 2) {
        unit *= 2.0 * kPi / static_cast<double>(k);
    }
    double scale = 1.0;
    for (std::size_t k = 0; k < d; ++k) scale *= delta;
    return unit * scale;
}

double median3(double a, double b, double c) {
    return std::max(std::min(a, b), std::min(std::max(a, b), c));
}

} // namespace

std::string to_string(KernelFamily f) {
    switch (f) {
        case KernelFamily::UniformBall: return "uniform_ball";
        case KernelFamily::Epanechnikov: return "epanechnikov";
        case KernelFamily::Gaussian: return "gaussian";
        case KernelFamily::Product: return "product";
    }
    return "?";
}

std::string to_string(Metric m) {
    switch (m) {
        case Metric::Euclidean: return "euclidean";
        case Metric::MaxComponent: return "max_component";
        case Metric::MaxRelative: return "max_relative";
    }
    return "?";
}

double max_relative_error_metric(const DataVector& d, const DataVector& x) {
    validate_pair(d, x);
    double r = 0.0;
    for (std::size_t i = 0; i < d.dim(); ++i) {
        if (d[i] == 0.0) {
            throw DivisionByZeroError("max_relative_error_metric: component " + std::to_string(i) +
                                      " of the reference data is zero");
        }
        r = std::max(r, std::abs(d[i] - x[i]) / std::abs(d[i]));
    }
    return r;
}

double DiscrepancyKernel::metric_scale(std::size_t i) const {
    if (metric_ == Metric::MaxRelative) {
        if (reference_.empty()) {
            throw UnsupportedError("max_relative metric needs a reference vector; call with_reference");
        }
        return delta_ * std::abs(reference_[i]);
    }
    return delta_;
}

DiscrepancyKernel DiscrepancyKernel::uniform_ball(double delta, Metric metric, std::size_t dim) {
    if (!(delta > 0.0)) throw Error("uniform_ball: delta must be positive");
    if (dim == 0) throw Error("uniform_ball: dimension must be positive");
    DiscrepancyKernel k;
    k.family_ = KernelFamily::UniformBall;
    k.metric_ = metric;
    k.dim_ = dim;
    k.delta_ = delta;
    if (metric == Metric::Euclidean) {
        k.norm_lin_ = 1.0 / euclidean_ball_volume(dim, delta);
    } else if (metric == Metric::MaxComponent) {
        k.norm_lin_ = 1.0 / std::pow(2.0 * delta, static_cast<double>(dim));
    } else {
        k.norm_lin_ = 1.0; // completed by with_reference
    }
    k.log_norm_ = std::log(k.norm_lin_);
    k.c_ = k.norm_lin_;
    return k;
}

DiscrepancyKernel DiscrepancyKernel::epanechnikov(double delta, Metric metric, std::size_t dim) {
    if (!(delta > 0.0)) throw Error("epanechnikov: delta must be positive");
    if (dim == 0) throw Error("epanechnikov: dimension must be positive");
    if (dim > 1 && metric != Metric::Euclidean) {
        throw UnsupportedError("multivariate epanechnikov is only normalized for the euclidean metric; "
                               "use a product kernel for per-component errors");
    }
    DiscrepancyKernel k;
    k.family_ = KernelFamily::Epanechnikov;
    k.metric_ = metric;
    k.dim_ = dim;
    k.delta_ = delta;
    if (metric == Metric::MaxRelative) {
        k.norm_lin_ = 1.0; // completed by with_reference
    } else {
        const double dd = static_cast<double>(dim);
        k.norm_lin_ = (dd + 2.0) / (2.0 * euclidean_ball_volume(dim, delta));
    }
    k.log_norm_ = std::log(k.norm_lin_);
    k.c_ = k.norm_lin_;
    return k;
}

DiscrepancyKernel DiscrepancyKernel::gaussian(double sigma) {
    return gaussian(std::vector<double>{sigma});
}

DiscrepancyKernel DiscrepancyKernel::gaussian(std::vector<double> sigmas) {
    if (sigmas.empty()) throw Error("gaussian: at least one scale required");
    for (double s : sigmas) {
        if (!(s > 0.0)) throw Error("gaussian: sigma must be positive");
    }
    DiscrepancyKernel k;
    k.family_ = KernelFamily::Gaussian;
    k.dim_ = sigmas.size();
    k.sigmas_ = std::move(sigmas);
    k.delta_ = k.sigmas_[0];
    k.log_norm_ = 0.0;
    for (double s : k.sigmas_) k.log_norm_ -= std::log(s) + 0.5 * kLog2Pi;
    k.norm_lin_ = std::exp(k.log_norm_);
    // density(0) evaluates to exp(log_norm_), so this bound is exact there.
    k.c_ = k.norm_lin_;
    return k;
}

DiscrepancyKernel DiscrepancyKernel::product(std::vector<DiscrepancyKernel> children) {
    if (children.empty()) throw Error("product: at least one child kernel required");
    DiscrepancyKernel k;
    k.family_ = KernelFamily::Product;
    k.dim_ = 0;
    double c = 1.0;
    for (const auto& child : children) {
        k.dim_ += child.dim();
        c *= child.bound();
    }
    k.children_ = std::move(children);
    k.norm_lin_ = c;
    k.c_ = c;
    return k;
}

DiscrepancyKernel DiscrepancyKernel::with_reference(std::vector<double> reference) const {
    DiscrepancyKernel k = *this;
    if (family_ == KernelFamily::Product) {
        std::size_t off = 0;
        for (auto& child : k.children_) {
            std::vector<double> slice(reference.begin() + static_cast<std::ptrdiff_t>(off),
                                      reference.begin() + static_cast<std::ptrdiff_t>(off + child.dim()));
            child = child.with_reference(std::move(slice));
            off += child.dim();
        }
        double c = 1.0;
        for (const auto& child : k.children_) c *= child.bound();
        k.norm_lin_ = c;
        k.c_ = c;
        return k;
    }
    if (reference.size() != dim_) {
        throw DimensionMismatchError("with_reference: reference dimension " + std::to_string(reference.size()) +
                                     " does not match kernel dimension " + std::to_string(dim_));
    }
    for (std::size_t i = 0; i < reference.size(); ++i) {
        if (reference[i] == 0.0) {
            throw DivisionByZeroError("with_reference: component " + std::to_string(i) + " is zero");
        }
    }
    k.reference_ = std::move(reference);
    if (metric_ == Metric::MaxRelative) {
        // Support is the box prod_i [-delta |ref_i|, delta |ref_i|].
        double vol = 1.0;
        for (std::size_t i = 0; i < k.dim_; ++i) vol *= 2.0 * k.metric_scale(i);
        if (family_ == KernelFamily::UniformBall) {
            k.norm_lin_ = 1.0 / vol;
        } else if (family_ == KernelFamily::Epanechnikov) {
            if (k.dim_ != 1) {
                throw UnsupportedError("epanechnikov with max_relative metric is scalar-only");
            }
            k.norm_lin_ = 1.5 / vol;
        }
        k.log_norm_ = std::log(k.norm_lin_);
        k.c_ = k.norm_lin_;
    }
    return k;
}

DiscrepancyKernel DiscrepancyKernel::with_bound(double c) const {
    if (!(c > 0.0)) throw Error("with_bound: c must be positive");
    DiscrepancyKernel k = *this;
    k.c_ = c;
    return k;
}

void DiscrepancyKernel::check_dim(const DataVector& diff) const {
    if (diff.dim() != dim_) {
        throw DimensionMismatchError("kernel of dimension " + std::to_string(dim_) +
                                     " evaluated on a difference of dimension " + std::to_string(diff.dim()));
    }
}

double DiscrepancyKernel::reduce(const DataVector& diff) const {
    switch (metric_) {
        case Metric::Euclidean: {
            double s = 0.0;
            for (double v : diff.values) s += v * v;
            return std::sqrt(s);
        }
        case Metric::MaxComponent: {
            double r = 0.0;
            for (double v : diff.values) r = std::max(r, std::abs(v));
            return r;
        }
        case Metric::MaxRelative: {
            if (reference_.empty()) {
                throw UnsupportedError("max_relative metric needs a reference vector; call with_reference");
            }
            double r = 0.0;
            for (std::size_t i = 0; i < diff.dim(); ++i) {
                r = std::max(r, std::abs(diff[i]) / std::abs(reference_[i]));
            }
            return r;
        }
    }
    return 0.0;
}

double DiscrepancyKernel::log_density(const DataVector& diff) const {
    check_dim(diff);
    switch (family_) {
        case KernelFamily::UniformBall: {
            const double r = reduce(diff);
            return r <= delta_ ? log_norm_ : -kInf;
        }
        case KernelFamily::Epanechnikov: {
            // reduce() already yields the metric value, so the quadratic
            // profile reads r/delta for every metric.
            const double r = reduce(diff);
            if (r > delta_) return -kInf;
            const double q = 1.0 - (r / delta_) * (r / delta_);
            return q > 0.0 ? log_norm_ + std::log(q) : -kInf;
        }
        case KernelFamily::Gaussian: {
            double lp = log_norm_;
            for (std::size_t i = 0; i < dim_; ++i) {
                const double z = diff[i] / sigmas_[i];
                lp -= 0.5 * z * z;
            }
            return lp;
        }
        case KernelFamily::Product: {
            double lp = 0.0;
            std::size_t off = 0;
            for (const auto& child : children_) {
                DataVector block;
                block.is_summary = diff.is_summary;
                block.values.assign(diff.values.begin() + static_cast<std::ptrdiff_t>(off),
                                    diff.values.begin() + static_cast<std::ptrdiff_t>(off + child.dim()));
                lp += child.log_density(block);
                off += child.dim();
            }
            return lp;
        }
    }
    return -kInf;
}

double DiscrepancyKernel::density(const DataVector& diff) const {
    // Linear-space evaluation: the compact families yield exact values
    // (e.g. exactly 1/(2 delta) inside a scalar ball), which the weighting
    // and evidence identities rely on.
    check_dim(diff);
    double v = 0.0;
    switch (family_) {
        case KernelFamily::UniformBall:
            v = reduce(diff) <= delta_ ? norm_lin_ : 0.0;
            break;
        case KernelFamily::Epanechnikov: {
            const double r = reduce(diff);
            if (r > delta_) return 0.0;
            const double q = 1.0 - (r / delta_) * (r / delta_);
            v = q > 0.0 ? norm_lin_ * q : 0.0;
            break;
        }
        case KernelFamily::Gaussian:
            v = std::exp(log_density(diff));
            break;
        case KernelFamily::Product: {
            v = 1.0;
            std::size_t off = 0;
            for (const auto& child : children_) {
                DataVector block;
                block.is_summary = diff.is_summary;
                block.values.assign(diff.values.begin() + static_cast<std::ptrdiff_t>(off),
                                    diff.values.begin() + static_cast<std::ptrdiff_t>(off + child.dim()));
                v *= child.density(block);
                off += child.dim();
                if (v == 0.0) break;
            }
            break;
        }
    }
    return v < kLinearClamp ? 0.0 : v;
}

double DiscrepancyKernel::acceptance_prob(const DataVector& diff) const {
    const double d = density(diff);
    if (std::isnan(d)) {
        throw Error("kernel density is NaN; the difference vector contains non-finite components");
    }
    if (d > c_ * (1.0 + 1e-12)) {
        throw InvalidBoundError("kernel density " + std::to_string(d) + " exceeds the configured bound c = " +
                                std::to_string(c_));
    }
    return std::min(1.0, d / c_);
}

double DiscrepancyKernel::error_variance() const {
    if (family_ == KernelFamily::Product) {
        throw UnsupportedError("product kernels report per-child variances; use error_variances()");
    }
    if (dim_ != 1) {
        throw UnsupportedError("error_variance is defined for scalar kernels only");
    }
    switch (family_) {
        case KernelFamily::UniformBall: {
            const double s = metric_scale(0);
            return s * s / 3.0;
        }
        case KernelFamily::Epanechnikov: {
            const double s = metric_scale(0);
            return s * s / 5.0;
        }
        case KernelFamily::Gaussian:
            return sigmas_[0] * sigmas_[0];
        default:
            break;
    }
    throw UnsupportedError("error_variance: unsupported family");
}

std::vector<double> DiscrepancyKernel::error_variances() const {
    if (family_ != KernelFamily::Product) return {error_variance()};
    std::vector<double> out;
    out.reserve(children_.size());
    for (const auto& c : children_) out.push_back(c.error_variance());
    return out;
}

double DiscrepancyKernel::sample_error(RngStream& rng) const {
    if (dim_ != 1 || family_ == KernelFamily::Product) {
        throw UnsupportedError("sample_error is defined for scalar kernels only");
    }
    switch (family_) {
        case KernelFamily::UniformBall: {
            const double s = metric_scale(0);
            return rng.uniform(-s, s);
        }
        case KernelFamily::Epanechnikov: {
            // Median of three U[-1,1] draws has the Epanechnikov density.
            const double s = metric_scale(0);
            return s * median3(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
        }
        case KernelFamily::Gaussian:
            return sigmas_[0] * rng.normal();
        default:
            break;
    }
    throw UnsupportedError("sample_error: unsupported family");
}

std::string DiscrepancyKernel::describe() const {
    std::ostringstream os;
    os << to_string(family_) << "(";
    if (family_ == KernelFamily::Product) {
        for (std::size_t i = 0; i < children_.size(); ++i) {
            if (i) os << ",";
            os << children_[i].describe();
        }
    } else if (family_ == KernelFamily::Gaussian) {
        os << "sigma=";
        for (std::size_t i = 0; i < sigmas_.size(); ++i) {
            if (i) os << ";";
            os << sigmas_[i];
        }
    } else {
        os << "delta=" << delta_ << ",metric=" << to_string(metric_);
    }
    os << ")";
    return os.str();
}

} // namespace abc
