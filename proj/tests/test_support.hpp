#ifndef ABC_TEST_SUPPORT_HPP
#define ABC_TEST_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace test_support {

/// Kolmogorov-Smirnov statistic of a sample against a reference CDF.
inline double ks_statistic_vs_cdf(std::vector<double> sample, const std::function<double(double)>& cdf) {
    if (sample.empty()) throw std::runtime_error("ks: empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(f - static_cast<double>(i + 1) / n));
    }
    return d;
}

inline double ks_statistic_two_sample(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j]) {
            ++i;
        } else {
            ++j;
        }
        const double fa = static_cast<double>(i) / static_cast<double>(a.size());
        const double fb = static_cast<double>(j) / static_cast<double>(b.size());
        d = std::max(d, std::abs(fa - fb));
    }
    return d;
}

/// Asymptotic one-sample KS p-value with the Stephens small-sample correction.
inline double ks_p_value(double statistic, std::size_t n) {
    const double sn = std::sqrt(static_cast<double>(n));
    const double lambda = (sn + 0.12 + 0.11 / sn) * statistic;
    double p = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        p += sign * term;
        sign = -sign;
        if (term < 1e-12) break;
    }
    return std::clamp(2.0 * p, 0.0, 1.0);
}

/// Total-variation distance between two discrete distributions.
inline double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size()) throw std::runtime_error("tv: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
    return 0.5 * s;
}

/// CDF built from a density on a fine uniform grid (trapezoid cumulative,
/// linear interpolation between nodes).
class GridCdf {
public:
    GridCdf(const std::function<double(double)>& density, double lo, double hi, std::size_t points = 40001)
        : lo_(lo), hi_(hi) {
        if (points < 2) throw std::runtime_error("GridCdf: need at least 2 points");
        h_ = (hi - lo) / static_cast<double>(points - 1);
        cum_.resize(points, 0.0);
        double prev = density(lo);
        for (std::size_t i = 1; i < points; ++i) {
            const double cur = density(lo + h_ * static_cast<double>(i));
            cum_[i] = cum_[i - 1] + 0.5 * (prev + cur) * h_;
            prev = cur;
        }
        const double z = cum_.back();
        if (!(z > 0.0)) throw std::runtime_error("GridCdf: zero total mass");
        for (double& c : cum_) c /= z;
    }

    double operator()(double x) const {
        if (x <= lo_) return 0.0;
        if (x >= hi_) return 1.0;
        const double pos = (x - lo_) / h_;
        const std::size_t i = static_cast<std::size_t>(pos);
        const double frac = pos - static_cast<double>(i);
        return cum_[i] + frac * (cum_[i + 1] - cum_[i]);
    }

private:
    double lo_, hi_, h_;
    std::vector<double> cum_;
};

/// Composite Simpson quadrature (n subintervals, forced even).
inline double simpson(const std::function<double(double)>& f, double a, double b, std::size_t n = 2000) {
    if (n % 2 == 1) ++n;
    const double h = (b - a) / static_cast<double>(n);
    double s = f(a) + f(b);
    for (std::size_t i = 1; i < n; ++i) {
        s += f(a + h * static_cast<double>(i)) * (i % 2 == 1 ? 4.0 : 2.0);
    }
    return s * h / 3.0;
}

struct MomentSummary {
    double mean = 0.0;
    double var = 0.0;
    double se_mean = 0.0;
    double se_var = 0.0; // from the fourth central moment
};

inline MomentSummary summarize(const std::vector<double>& xs) {
    const double n = static_cast<double>(xs.size());
    MomentSummary s;
    for (double x : xs) s.mean += x;
    s.mean /= n;
    double m2 = 0.0, m4 = 0.0;
    for (double x : xs) {
        const double d = x - s.mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    s.var = m2 / (n - 1.0);
    m2 /= n;
    m4 /= n;
    s.se_mean = std::sqrt(s.var / n);
    s.se_var = std::sqrt(std::max(0.0, m4 - m2 * m2) / n);
    return s;
}

/// Empirical distribution of scalar samples over a known value set.
inline std::vector<double> empirical_distribution(const std::vector<double>& samples,
                                                  const std::vector<double>& values) {
    std::vector<double> freq(values.size(), 0.0);
    for (double s : samples) {
        bool found = false;
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (values[i] == s) {
                freq[i] += 1.0;
                found = true;
                break;
            }
        }
        if (!found) throw std::runtime_error("empirical_distribution: sample value off the grid");
    }
    for (double& f : freq) f /= static_cast<double>(samples.size());
    return freq;
}

} // namespace test_support

#endif // ABC_TEST_SUPPORT_HPP
