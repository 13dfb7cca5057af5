#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace pshlab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Smallest s in [lo, hi] with f(s) >= target, for nondecreasing f.
/// Assumes f(lo) < target <= f(hi); bisects to relative width tol.
inline double bisect_nondecreasing(const std::function<double(double)>& f,
                                   double lo, double hi, double target,
                                   double tol = 1e-13, int max_iter = 200) {
    for (int i = 0; i < max_iter; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo <= tol * std::max(1.0, std::abs(mid))) break;
        if (f(mid) >= target)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

/// Maximizer of a unimodal f on [a, b] by golden-section search.
struct GoldenResult {
    double x = 0.0;
    double value = 0.0;
    int evaluations = 0;
};

inline GoldenResult golden_section_max(const std::function<double(double)>& f,
                                       double a, double b, int max_iter = 120,
                                       double tol = 1e-12) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    int evals = 2;
    for (int i = 0; i < max_iter && (b - a) > tol * std::max(1.0, std::abs(a) + std::abs(b)); ++i) {
        if (fc > fd) {
            b = d; d = c; fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
        ++evals;
    }
    GoldenResult r;
    r.x = 0.5 * (a + b);
    r.value = f(r.x);
    r.evaluations = evals + 1;
    return r;
}

/// One-sided second-order finite difference for f'(0) on a right domain.
inline double forward_derivative(const std::function<double(double)>& f,
                                 double x0, double h = 1e-6) {
    return (-3.0 * f(x0) + 4.0 * f(x0 + h) - f(x0 + 2.0 * h)) / (2.0 * h);
}

/// Central finite difference.
inline double central_derivative(const std::function<double(double)>& f,
                                 double x, double h = 1e-6) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace pshlab
