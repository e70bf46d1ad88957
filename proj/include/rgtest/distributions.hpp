#pragma once

namespace rgtest {

/// Standard normal CDF, via std::erfc (sub-1e-15 absolute error).
double normal_cdf(double x) noexcept;
/// Upper tail 1 - Phi(x), computed without cancellation.
double normal_sf(double x) noexcept;
/// Phi^{-1}(p) for p in (0, 1), by bisection to 1e-14.
double normal_quantile(double p);
/// z with 1 - Phi(z) = alpha.
double normal_upper_quantile(double alpha);

/// Chi-squared survival with 2 degrees of freedom: exp(-s/2).
double chi2_2df_sf(double s);
/// Upper alpha quantile of chi-squared with 2 df: -2 ln(alpha).
double chi2_2df_upper_quantile(double alpha);

/// Bisection root of a decreasing function on [lo, hi].
template <typename F>
double bisect_decreasing(F&& f, double target, double lo, double hi, double tol = 1e-12) {
    for (int iter = 0; iter < 400 && hi - lo > tol; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) > target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace rgtest
