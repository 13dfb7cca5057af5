#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pshlab/quadrature.hpp"

namespace pshlab {

/// Nonincreasing distribution function t -> F(t) >= 0 on (0, +inf),
/// right-continuous, with explicit jump bookkeeping.  This is the only
/// representation of a measured function the library works with: F(t) is the
/// mass of a strict superlevel/sublevel set at height t.
class DistributionFunction {
public:
    struct Jump {
        double t;
        double left;
        double right;
    };

    enum class Tail { compact, exponential, power, generic };

    DistributionFunction() : impl_(zero().impl_) {}

    /// Right-continuous value at t > 0.
    double operator()(double t) const {
        if (t >= impl_->t_max) return 0.0;
        return impl_->value(std::max(t, 0.0));
    }

    /// Left limit at t; differs from operator() only on the jump list.
    double left_value(double t) const {
        for (const Jump& j : impl_->jumps)
            if (std::abs(t - j.t) <= 1e-12 * std::max(1.0, std::abs(t))) return j.left;
        return (*this)(t);
    }

    /// log F(t); exact for analytic tails, falls back to log of the value.
    double log_value(double t) const {
        if (t >= impl_->t_max) return -kInf;
        if (impl_->log_fn) return impl_->log_fn(std::max(t, 0.0));
        const double v = (*this)(t);
        return v > 0.0 ? std::log(v) : -kInf;
    }

    /// Supremum of the support (+inf when unbounded).
    double t_max() const { return impl_->t_max; }

    const std::vector<Jump>& jumps() const { return impl_->jumps; }

    bool is_zero() const { return impl_->zero; }

    std::optional<double> known_integral() const { return impl_->integral; }

    Tail tail_kind() const { return impl_->tail; }
    double tail_rate() const { return impl_->tail_rate; }

    // -- factories ----------------------------------------------------------

    static DistributionFunction zero() {
        Impl impl;
        impl.value = [](double) { return 0.0; };
        impl.t_max = 0.0;
        impl.zero = true;
        impl.integral = 0.0;
        impl.tail = Tail::compact;
        return DistributionFunction(std::move(impl));
    }

    /// F = height on (0, t_max), 0 afterwards (a single atom of mass `height`
    /// sitting at value t_max).
    static DistributionFunction step(double height, double t_max) {
        if (!(height >= 0.0) || !(t_max >= 0.0))
            throw std::invalid_argument("DistributionFunction::step: negative parameters");
        if (height == 0.0 || t_max == 0.0) return zero();
        Impl impl;
        impl.value = [height](double) { return height; };
        impl.t_max = t_max;
        impl.jumps.push_back({t_max, height, 0.0});
        impl.integral = height * t_max;
        impl.tail = Tail::compact;
        return DistributionFunction(std::move(impl));
    }

    /// F = height for every t (all mass at an infinitely negative value).
    static DistributionFunction constant(double height) {
        if (!(height >= 0.0))
            throw std::invalid_argument("DistributionFunction::constant: negative height");
        if (height == 0.0) return zero();
        Impl impl;
        impl.value = [height](double) { return height; };
        impl.tail = Tail::generic;
        return DistributionFunction(std::move(impl));
    }

    struct Options {
        double t_max = kInf;
        std::vector<Jump> jumps;
        std::function<double(double)> log_fn;  // optional exact log F
        std::optional<double> integral;
        Tail tail = Tail::generic;
        double tail_rate = 0.0;
    };

    static DistributionFunction from_function(std::function<double(double)> f, Options opts) {
        Impl impl;
        impl.value = std::move(f);
        impl.log_fn = std::move(opts.log_fn);
        impl.t_max = opts.t_max;
        impl.jumps = std::move(opts.jumps);
        impl.integral = opts.integral;
        impl.tail = opts.tail;
        impl.tail_rate = opts.tail_rate;
        impl.zero = probe_zero(impl);
        std::sort(impl.jumps.begin(), impl.jumps.end(),
                  [](const Jump& a, const Jump& b) { return a.t < b.t; });
        return DistributionFunction(std::move(impl));
    }

    /// Piecewise-linear interpolant of (t, F) samples with an explicit tail
    /// model past the last sample.  Samples must be sorted with nonincreasing
    /// values; jump endpoints are expected to appear as adjacent samples.
    static DistributionFunction from_samples(std::vector<std::pair<double, double>> samples,
                                             std::vector<Jump> jumps,
                                             Tail tail, double tail_rate) {
        if (samples.empty()) return zero();
        for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
            if (samples[i].first > samples[i + 1].first)
                throw std::invalid_argument("DistributionFunction::from_samples: unsorted samples");
            if (samples[i].second < samples[i + 1].second - 1e-12)
                throw std::invalid_argument("DistributionFunction::from_samples: increasing values");
        }
        const double t_last = samples.back().first;
        const double f_last = samples.back().second;
        double t_max = kInf;
        if (tail == Tail::compact) t_max = t_last;
        auto table = std::make_shared<const std::vector<std::pair<double, double>>>(std::move(samples));
        Impl impl;
        impl.value = [table, tail, tail_rate, t_last, f_last](double t) {
            const auto& tab = *table;
            if (t <= tab.front().first) return tab.front().second;
            if (t >= t_last) {
                switch (tail) {
                    case Tail::compact: return 0.0;
                    case Tail::exponential: return f_last * std::exp(-tail_rate * (t - t_last));
                    case Tail::power: return f_last * std::pow(t / t_last, -tail_rate);
                    case Tail::generic: return 0.0;
                }
            }
            auto it = std::upper_bound(tab.begin(), tab.end(), std::make_pair(t, kInf));
            const auto& [t1, f1] = *it;
            const auto& [t0, f0] = *(it - 1);
            if (t1 == t0) return f1;
            const double w = (t - t0) / (t1 - t0);
            return f0 + w * (f1 - f0);
        };
        impl.t_max = t_max;
        impl.jumps = std::move(jumps);
        impl.tail = tail;
        impl.tail_rate = tail_rate;
        impl.zero = probe_zero(impl);
        return DistributionFunction(std::move(impl));
    }

private:
    struct Impl {
        std::function<double(double)> value;
        std::function<double(double)> log_fn;
        double t_max = kInf;
        std::vector<Jump> jumps;
        bool zero = false;
        std::optional<double> integral;
        Tail tail = Tail::generic;
        double tail_rate = 0.0;
    };

    static bool probe_zero(const Impl& impl) {
        if (impl.t_max <= 0.0) return true;
        if (impl.integral && *impl.integral == 0.0 && impl.jumps.empty()) return true;
        std::vector<double> probes;
        if (std::isfinite(impl.t_max)) {
            for (double frac : {1e-8, 1e-4, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0 - 1e-9})
                probes.push_back(impl.t_max * frac);
        } else {
            for (int e = -8; e <= 8; ++e) probes.push_back(std::pow(10.0, e));
        }
        for (const Jump& j : impl.jumps) {
            if (j.left != 0.0 || j.right != 0.0) return false;
        }
        for (double t : probes)
            if (impl.value(t) != 0.0) return false;
        return true;
    }

    explicit DistributionFunction(Impl impl) : impl_(std::make_shared<const Impl>(std::move(impl))) {}

    std::shared_ptr<const Impl> impl_;
};

/// Integral of F over [from, +inf), splitting at the jump list.
inline IntegralResult distribution_integral(const DistributionFunction& F, double from,
                                            const QuadratureSpec& spec) {
    IntegralResult out;
    if (F.is_zero() || from >= F.t_max()) return out;
    from = std::max(from, 0.0);

    std::vector<double> splits;
    for (const auto& j : F.jumps()) splits.push_back(j.t);
    auto f = [&F](double t) { return F(t); };

    if (std::isfinite(F.t_max()))
        return integrate_split(f, from, F.t_max(), splits, spec);

    double T0 = std::max(from, 1.0);
    for (double s : splits) T0 = std::max(T0, s);
    auto head = integrate_split(f, from, T0, splits, spec);
    if (head.divergent) return head;
    auto tail = integrate_semi_infinite(
        f, T0, spec, [](double, double) { return std::vector<double>{}; });
    tail.value += head.value;
    tail.error += head.error;
    tail.evaluations += head.evaluations;
    tail.converged = tail.converged && head.converged;
    return tail;
}

/// Total integral, preferring the cached value when the factory knew it.
inline IntegralResult distribution_total(const DistributionFunction& F, const QuadratureSpec& spec) {
    if (auto known = F.known_integral()) {
        IntegralResult r;
        r.value = *known;
        return r;
    }
    return distribution_integral(F, 0.0, spec);
}

}  // namespace pshlab
