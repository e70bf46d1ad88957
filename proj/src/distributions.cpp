#include "rgtest/distributions.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "rgtest/error.hpp"

namespace rgtest {

double normal_cdf(double x) noexcept {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double normal_sf(double x) noexcept {
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw Error(ErrorKind::invalid_input, "normal quantile needs p in (0, 1), got " + std::to_string(p));
    }
    return normal_upper_quantile(1.0 - p);
}

double normal_upper_quantile(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw Error(ErrorKind::invalid_input, "alpha must lie in (0, 1), got " + std::to_string(alpha));
    }
    return bisect_decreasing([](double x) { return normal_sf(x); }, alpha, -40.0, 40.0, 1e-14);
}

double chi2_2df_sf(double s) {
    if (!(s >= 0.0)) throw Error(ErrorKind::invalid_input, "chi-squared statistic must be >= 0");
    return std::exp(-0.5 * s);
}

double chi2_2df_upper_quantile(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw Error(ErrorKind::invalid_input, "alpha must lie in (0, 1), got " + std::to_string(alpha));
    }
    return -2.0 * std::log(alpha);
}

}  // namespace rgtest
