#include "abc/models/toy_mixture.hpp"

#include "abc/math.hpp"

namespace abc::models {

double toy_posterior_uniform_error(double theta, double delta) {
    if (theta < -10.0 || theta > 10.0) return 0.0;
    const double wide = normal_cdf(delta - theta) - normal_cdf(-delta - theta);
    const double narrow = normal_cdf(10.0 * (delta - theta)) - normal_cdf(10.0 * (-delta - theta));
    return 0.5 * wide + 0.5 * narrow;
}

double toy_posterior_gaussian_error(double theta, double delta) {
    if (theta < -10.0 || theta > 10.0) return 0.0;
    const double v = delta * delta / 3.0;
    return 0.5 * normal_pdf(theta, 0.0, 1.0 + v) + 0.5 * normal_pdf(theta, 0.0, 0.01 + v);
}

} // namespace abc::models
