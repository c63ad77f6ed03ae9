#ifndef ABC_MATH_HPP
#define ABC_MATH_HPP

#include <cmath>

namespace abc {

inline double normal_cdf(double x) {
    return 0.5 * std::erfc(-x * 0.7071067811865475244);
}

inline double normal_pdf(double x, double mean, double variance) {
    const double z = (x - mean) * (x - mean) / variance;
    return std::exp(-0.5 * z) / std::sqrt(6.283185307179586477 * variance);
}

} // namespace abc

#endif // ABC_MATH_HPP
