#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "pshlab/distribution.hpp"
#include "pshlab/quadrature.hpp"
#include "pshlab/weight.hpp"

namespace pshlab {

namespace detail {

/// Fused layer-cake integrand (1/lambda) h'(t/lambda) F(t).  F is evaluated
/// first so that vanished distributions never touch an overflowing h', and
/// extreme factor pairs are recombined in the log domain.
template <class W>
double layercake_point(const DistributionFunction& F, const W& w, double lambda, double t) {
    const double f = F(t);
    if (f == 0.0) return 0.0;
    const double u = t / lambda;
    const double hp = w.hprime(u);
    const double plain = hp * f / lambda;
    if (std::isfinite(plain) && std::isfinite(hp) && !(hp < 1e-290 && f > 1e100))
        return plain;
    const double lg = w.log_hprime(u) + F.log_value(t) - std::log(lambda);
    if (std::isnan(lg)) return plain;
    return lg > 709.0 ? kInf : std::exp(lg);
}

inline void merge_piece(IntegralResult& out, const IntegralResult& piece) {
    out.value += piece.value;
    out.error += piece.error;
    out.evaluations += piece.evaluations;
    out.converged = out.converged && piece.converged;
    out.divergent = out.divergent || piece.divergent;
    out.last_block = piece.last_block;
    if (!piece.note.empty()) out.note = piece.note;
}

}  // namespace detail

/// int_0^inf (1/lambda) h'(t/lambda) F(t) dt, split at the jumps of F and the
/// lambda-scaled kinks of the weight.  Nonincreasing in lambda.  `stop_above`
/// lets a norm solver bail out once the running total has decided the
/// "is it <= 1" question.
template <class W>
IntegralResult layercake_integral(const DistributionFunction& F, const W& w, double lambda,
                                  const QuadratureSpec& spec, double stop_above = kInf) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("layercake_integral: lambda must be positive");
    spec.validate();

    IntegralResult out;
    if (F.is_zero()) return out;

    auto f = [&](double t) { return detail::layercake_point(F, w, lambda, t); };

    std::vector<double> splits;
    for (const auto& j : F.jumps()) splits.push_back(j.t);
    for (double b : w.breakpoints())
        if (b > 0.0) splits.push_back(lambda * b);
    std::sort(splits.begin(), splits.end());

    const double t_max = F.t_max();
    double t_low = std::min(lambda, 1.0);
    if (std::isfinite(t_max)) t_low = std::min(t_low, t_max);
    for (double s : splits)
        if (s > 0.0) { t_low = std::min(t_low, s); break; }

    auto origin = integrate_origin(f, t_low, spec);
    detail::merge_piece(out, origin);
    if (out.divergent) {
        out.value = kInf;
        return out;
    }

    if (std::isfinite(t_max)) {
        if (t_max > t_low) {
            auto mid = integrate_split(f, t_low, t_max, splits, spec);
            detail::merge_piece(out, mid);
            if (out.divergent) out.value = kInf;
        }
        return out;
    }

    double T0 = std::max({t_low, lambda, 1.0});
    for (double s : splits) T0 = std::max(T0, std::min(s, 1e6));
    if (T0 > t_low) {
        auto mid = integrate_split(f, t_low, T0, splits, spec);
        detail::merge_piece(out, mid);
        if (out.divergent) {
            out.value = kInf;
            return out;
        }
        if (out.value >= stop_above) {
            out.note = "stopped early: running total passed caller cutoff";
            return out;
        }
    }

    auto tail = integrate_semi_infinite(
        f, T0, spec,
        [&](double lo, double hi) {
            std::vector<double> in;
            for (double s : splits)
                if (s > lo && s < hi) in.push_back(s);
            return in;
        },
        stop_above > out.value ? stop_above - out.value : 0.0);
    detail::merge_piece(out, tail);
    if (out.divergent) out.value = kInf;
    return out;
}

/// Result of a Luxembourg/Choquet norm computation.  `value` is +inf when no
/// finite lambda brings the layer-cake integral below 1 (the function is not
/// in the Orlicz space); `residual` is |integral(value) - 1| at the root.
struct NormResult {
    double value = 0.0;
    double residual = 0.0;
    long evaluations = 0;
    int layercake_calls = 0;
    bool converged = true;
    std::string note;

    bool finite() const { return std::isfinite(value); }
};

namespace detail {

template <class W>
NormResult orlicz_norm(const DistributionFunction& F, const W& w, const QuadratureSpec& spec) {
    NormResult out;
    if (F.is_zero()) return out;

    std::string last_note;
    auto at_least_one = [&](double lambda) {
        auto r = layercake_integral(F, w, lambda, spec, 4.0);
        out.evaluations += r.evaluations;
        ++out.layercake_calls;
        if (!r.note.empty()) last_note = r.note;
        if (r.divergent) return true;
        return r.value >= 1.0;
    };

    double lo = 1.0, hi = 1.0;
    if (at_least_one(1.0)) {
        // double until the integral drops below 1
        bool found = false;
        for (int i = 0; i < 64; ++i) {
            lo = hi;
            hi *= 2.0;
            if (!at_least_one(hi)) {
                found = true;
                break;
            }
        }
        if (!found) {
            out.value = kInf;
            out.note = "not in the Orlicz space: integral stays above 1 up to lambda = 2^64";
            if (!last_note.empty()) out.note += " [" + last_note + "]";
            return out;
        }
    } else {
        // halve until the integral reaches 1
        bool found = false;
        for (int i = 0; i < 64; ++i) {
            hi = lo;
            lo /= 2.0;
            if (at_least_one(lo)) {
                found = true;
                break;
            }
        }
        if (!found) {
            out.value = lo;
            out.converged = false;
            out.note = "norm below 2^-64; distribution numerically indistinguishable from zero";
            return out;
        }
    }

    // invariant: integral(lo) >= 1 > integral(hi)
    while (hi - lo > 1e-10 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (at_least_one(mid))
            lo = mid;
        else
            hi = mid;
    }
    out.value = hi;

    auto at_root = layercake_integral(F, w, out.value, spec);
    out.evaluations += at_root.evaluations;
    ++out.layercake_calls;
    out.residual = std::abs(at_root.value - 1.0);
    out.converged = at_root.ok();
    if (!at_root.note.empty()) out.note = at_root.note;
    return out;
}

}  // namespace detail

/// Luxembourg norm inf{lambda > 0 : int h(|f|/lambda) dmu <= 1} from the
/// distribution function F(t) = mu(|f| > t).  Returns 0 iff F vanishes; +inf
/// when f is not in the Orlicz space.
template <class W>
NormResult luxembourg_norm(const DistributionFunction& F, const W& w, const QuadratureSpec& spec = {}) {
    return detail::orlicz_norm(F, w, spec);
}

/// Choquet-Orlicz norm: the same solver driven by a capacity distribution
/// F_cap(t) = Cap(f > t), which may blow up near t = 0.  A non-integrable
/// singularity at 0 makes every layer-cake integral infinite and the norm
/// +inf, with the origin-block diagnostic in the note.
template <class W>
NormResult choquet_norm(const DistributionFunction& F_cap, const W& w, const QuadratureSpec& spec = {}) {
    return detail::orlicz_norm(F_cap, w, spec);
}

}  // namespace pshlab
