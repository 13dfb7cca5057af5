#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "pshlab/numeric.hpp"

namespace pshlab {

/// Tolerances and budgets shared by every integral in the library.
/// Infinite tails are closed out in dyadic blocks until a block contributes
/// less than rel_tol times the running total; once the blocks decay
/// geometrically the remainder is folded in through the map t = T + T*u/(1-u).
struct QuadratureSpec {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    int max_depth = 60;
    double divergence_threshold = 1e15;

    void validate() const {
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
            throw std::invalid_argument("QuadratureSpec: tolerances must be positive");
        if (max_depth < 10)
            throw std::invalid_argument("QuadratureSpec: max_depth must be >= 10");
    }
};

struct IntegralResult {
    double value = 0.0;
    double error = 0.0;      // accumulated local error estimate
    long evaluations = 0;
    bool converged = true;   // tolerance met within the budget
    bool divergent = false;  // classified as a divergent integral
    double last_block = 0.0; // contribution of the last tail/origin block
    std::string note;

    bool ok() const { return converged && !divergent; }
};

namespace detail {

// Gauss 7 / Kronrod 15 nodes and weights on [-1, 1].
struct Gk15 {
    double value = 0.0;
    double error = 0.0;
    bool finite = true;
};

template <class F>
Gk15 gk15(const F& f, double a, double b) {
    static const double node[8] = {
        0.000000000000000, 0.207784955007898, 0.405845151377397, 0.586087235467691,
        0.741531185599394, 0.864864423359769, 0.949107912342759, 0.991455371120813};
    static const double wk[8] = {
        0.209482141084728, 0.204432940075298, 0.190350578064785, 0.169004726639267,
        0.140653259715525, 0.104790010322250, 0.063092092629979, 0.022935322010529};
    static const double wg[4] = {
        0.417959183673469, 0.381830050505119, 0.279705391489277, 0.129484966168870};

    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const double f0 = f(mid);
    double k = wk[0] * f0;
    double g = wg[0] * f0;
    bool finite = std::isfinite(f0);
    for (int i = 1; i < 8; ++i) {
        const double dx = half * node[i];
        const double y = f(mid + dx) + f(mid - dx);
        finite = finite && std::isfinite(y);
        k += wk[i] * y;
        if (i % 2 == 0) g += wg[i / 2] * y;
    }
    Gk15 r;
    r.value = k * half;
    r.finite = finite && std::isfinite(r.value);
    const double d = std::abs((k - g) * half);
    r.error = r.finite ? std::min(d, std::pow(200.0 * d, 1.5)) : kInf;
    return r;
}

struct Interval {
    double a, b, value, error;
    bool operator<(const Interval& o) const { return error < o.error; }
};

}  // namespace detail

/// Globally adaptive Gauss-Kronrod integration on a finite interval.
/// Endpoint singularities are never sampled (all nodes are interior).
template <class F>
IntegralResult integrate_adaptive(const F& f, double a, double b, const QuadratureSpec& spec) {
    IntegralResult out;
    if (!(b > a)) return out;

    auto first = detail::gk15(f, a, b);
    out.evaluations = 15;
    if (!first.finite) {
        out.value = kInf;
        out.divergent = true;
        out.converged = false;
        out.note = "non-finite integrand";
        return out;
    }

    std::priority_queue<detail::Interval> heap;
    heap.push({a, b, first.value, first.error});
    double total = first.value;
    double toterr = first.error;
    const double min_width = (b - a) * std::ldexp(1.0, -spec.max_depth);
    long max_intervals = 4000;

    while (toterr > std::max(spec.abs_tol, spec.rel_tol * std::abs(total)) &&
           static_cast<long>(heap.size()) < max_intervals) {
        detail::Interval worst = heap.top();
        if (worst.error <= 0.0 || worst.b - worst.a <= min_width) break;
        heap.pop();
        const double m = 0.5 * (worst.a + worst.b);
        auto left = detail::gk15(f, worst.a, m);
        auto right = detail::gk15(f, m, worst.b);
        out.evaluations += 30;
        if (!left.finite || !right.finite) {
            out.value = kInf;
            out.divergent = true;
            out.converged = false;
            out.note = "non-finite integrand";
            return out;
        }
        total += left.value + right.value - worst.value;
        toterr += left.error + right.error - worst.error;
        heap.push({worst.a, m, left.value, left.error});
        heap.push({m, worst.b, right.value, right.error});
    }

    out.value = total;
    out.error = std::max(toterr, 0.0);
    out.converged = toterr <= std::max(spec.abs_tol, spec.rel_tol * std::abs(total)) ||
                    out.error <= spec.abs_tol;
    if (!out.converged) out.note = "adaptive refinement budget exhausted";
    return out;
}

/// Integrate over a finite interval, forcing subdivision at the given points
/// (jump locations, derivative kinks). Splits outside (a, b) are ignored.
template <class F>
IntegralResult integrate_split(const F& f, double a, double b,
                               const std::vector<double>& splits,
                               const QuadratureSpec& spec) {
    std::vector<double> cuts;
    cuts.push_back(a);
    for (double s : splits)
        if (s > a && s < b) cuts.push_back(s);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    IntegralResult out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        auto piece = integrate_adaptive(f, cuts[i], cuts[i + 1], spec);
        out.value += piece.value;
        out.error += piece.error;
        out.evaluations += piece.evaluations;
        out.converged = out.converged && piece.converged;
        out.divergent = out.divergent || piece.divergent;
        if (!piece.note.empty()) out.note = piece.note;
        if (out.divergent) {
            out.value = kInf;
            return out;
        }
    }
    return out;
}

/// Remainder of a geometrically decaying tail through t = S + S*u/(1-u).
template <class F>
IntegralResult integrate_mapped_tail(const F& f, double S, const QuadratureSpec& spec) {
    auto mapped = [&](double u) {
        const double w = 1.0 - u;
        const double t = S + S * u / w;
        return f(t) * S / (w * w);
    };
    return integrate_adaptive(mapped, 0.0, 1.0, spec);
}

/// Integrate f over [start, +inf) in dyadic blocks [T, 2T].  Stops when a
/// block contributes less than the tolerance times the running total, then
/// folds in the mapped remainder.  Classifies the integral as divergent when
/// the partial sum passes spec.divergence_threshold or the blocks refuse to
/// decay within the block budget.  `splits_in(lo, hi)` may supply interior
/// subdivision points per block; `stop_above` allows early exit once the
/// running total has passed a caller-side decision threshold.
template <class F, class SplitFn>
IntegralResult integrate_semi_infinite(const F& f, double start, const QuadratureSpec& spec,
                                       const SplitFn& splits_in, double stop_above = kInf) {
    IntegralResult out;
    double T = std::max(start, 1e-12);
    double prev_block = kInf;
    const int max_blocks = 512;

    for (int i = 0; i < max_blocks; ++i) {
        const double hi = 2.0 * T;
        auto block = integrate_split(f, T, hi, splits_in(T, hi), spec);
        out.evaluations += block.evaluations;
        out.last_block = block.value;
        if (block.divergent) {
            out.divergent = true;
            out.converged = false;
            out.note = "divergent tail block at [" + std::to_string(T) + ", " + std::to_string(hi) + ")";
            out.value = kInf;
            return out;
        }
        out.value += block.value;
        out.error += block.error;

        if (out.value > spec.divergence_threshold) {
            out.divergent = true;
            out.converged = false;
            out.note = "partial tail integral exceeded divergence threshold";
            return out;
        }
        if (out.value >= stop_above) {
            out.note = "stopped early: running total passed caller cutoff";
            return out;
        }

        const double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(out.value));
        if (block.value <= tol && prev_block <= 4.0 * tol) {
            auto rest = integrate_mapped_tail(f, hi, spec);
            out.evaluations += rest.evaluations;
            if (rest.ok() && std::isfinite(rest.value)) {
                out.value += rest.value;
                out.error += rest.error;
            }
            return out;
        }
        prev_block = block.value;
        T = hi;
        if (T > 1e300) break;
    }
    out.converged = false;
    out.divergent = out.last_block >= 0.9 * prev_block;
    out.note = out.divergent ? "tail blocks failed to decay within the block budget"
                             : "tail block budget exhausted before convergence";
    return out;
}

/// Integrate f over (0, t1] where f may blow up (integrably or not) at 0.
/// Works downward in geometric blocks [t/2, t]; decaying blocks converge,
/// non-decaying blocks classify a non-integrable singularity.
template <class F>
IntegralResult integrate_origin(const F& f, double t1, const QuadratureSpec& spec) {
    IntegralResult out;
    if (!(t1 > 0.0)) return out;
    double hi = t1;
    double prev_block = kInf;
    const int max_blocks = 512;

    for (int i = 0; i < max_blocks; ++i) {
        const double lo = 0.5 * hi;
        auto block = integrate_adaptive(f, lo, hi, spec);
        out.evaluations += block.evaluations;
        out.last_block = block.value;
        if (block.divergent || out.value > spec.divergence_threshold) {
            out.divergent = true;
            out.converged = false;
            out.value = kInf;
            out.note = "singular origin block at [" + std::to_string(lo) + ", " + std::to_string(hi) + ")";
            return out;
        }
        out.value += block.value;
        out.error += block.error;
        const double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(out.value));
        if (block.value <= tol && prev_block <= 4.0 * tol) return out;
        prev_block = block.value;
        hi = lo;
        if (hi < 1e-300) break;
    }
    out.converged = false;
    out.divergent = out.last_block >= 0.9 * prev_block;
    out.note = out.divergent ? "origin blocks failed to decay: non-integrable singularity at 0"
                             : "origin block budget exhausted before convergence";
    return out;
}

}  // namespace pshlab
