#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "pshlab/orlicz.hpp"

namespace pshlab {

/// Radial potential phi(z) = g(log|z|) on the ball of radius e^{s_max}
/// (s_max = 0 for the unit ball), represented by its profile g: convex,
/// nondecreasing, g(s_max) = 0.  Conventions:
///   - gprime_left is the left derivative; Monge-Ampere atoms sit at kinks;
///   - ginv(v) = inf{s : g(s) >= v}, i.e. the left endpoint of a flat piece,
///     and -inf once v <= g(-inf);
///   - the mass the Monge-Ampere measure gives to the closed ball of radius
///     e^s is gprime_right(s)^n, normalized so g(s) = s carries unit mass.
class RadialProfile {
public:
    double g(double s) const { return impl_->g(std::min(s, impl_->s_max)); }
    double gprime_left(double s) const {
        if (std::isinf(s) && s < 0.0) return 0.0;
        return impl_->gpl(std::min(s, impl_->s_max));
    }
    double gprime_right(double s) const {
        if (std::isinf(s) && s < 0.0) return 0.0;
        return impl_->gpr(std::min(s, impl_->s_max));
    }
    double ginv(double v) const {
        if (v >= 0.0) return impl_->s_max;
        if (v <= impl_->g_min) return -kInf;
        return impl_->ginv(v);
    }
    const std::vector<double>& breakpoints() const { return impl_->breakpoints; }
    double g_min() const { return impl_->g_min; }
    bool bounded() const { return std::isfinite(impl_->g_min); }
    double s_max() const { return impl_->s_max; }
    int dim() const { return impl_->n; }
    const std::string& kind() const { return impl_->kind; }
    const std::map<std::string, double>& params() const { return impl_->params; }
    const std::vector<RadialProfile>& children() const { return impl_->children; }

    struct Impl {
        std::function<double(double)> g;
        std::function<double(double)> gpl;
        std::function<double(double)> gpr;
        std::function<double(double)> ginv;  // may be empty: generic bisection
        std::vector<double> breakpoints;
        double g_min = -kInf;
        double s_max = 0.0;
        int n = 1;
        std::string kind;
        std::map<std::string, double> params;
        std::vector<RadialProfile> children;
    };

    static RadialProfile from_impl(Impl impl) {
        if (impl.n < 1) throw std::invalid_argument("RadialProfile: dimension must be >= 1");
        if (std::abs(impl.g(impl.s_max)) > 1e-12)
            throw std::invalid_argument("RadialProfile: profile must vanish at the boundary");
        if (!impl.ginv) {
            auto g = impl.g;
            auto s_max = impl.s_max;
            impl.ginv = [g, s_max](double v) {
                double hi = s_max, step = 1.0, lo = s_max - step;
                int guard = 0;
                while (g(lo) >= v) {
                    step *= 2.0;
                    lo = s_max - step;
                    if (++guard > 80) return -kInf;
                }
                return bisect_nondecreasing(g, lo, hi, v, 1e-14, 250);
            };
        }
        std::sort(impl.breakpoints.begin(), impl.breakpoints.end());
        impl.breakpoints.erase(std::unique(impl.breakpoints.begin(), impl.breakpoints.end()),
                               impl.breakpoints.end());
        RadialProfile p;
        p.impl_ = std::make_shared<const Impl>(std::move(impl));
        return p;
    }

private:
    RadialProfile() = default;
    std::shared_ptr<const Impl> impl_;
};

// -- profile families ---------------------------------------------------------

/// g(s) = s, i.e. phi = log|z|: the unit Dirac mass at the origin.
inline RadialProfile log_profile(int n) {
    RadialProfile::Impl im;
    im.g = [](double s) { return s; };
    im.gpl = im.gpr = [](double) { return 1.0; };
    im.ginv = [](double v) { return v; };
    im.n = n;
    im.kind = "log";
    return RadialProfile::from_impl(std::move(im));
}

inline RadialProfile zero_profile(int n, double s_max = 0.0) {
    RadialProfile::Impl im;
    im.g = [](double) { return 0.0; };
    im.gpl = im.gpr = [](double) { return 0.0; };
    im.ginv = [](double) { return -kInf; };
    im.g_min = 0.0;
    im.s_max = s_max;
    im.n = n;
    im.kind = "zero";
    return RadialProfile::from_impl(std::move(im));
}

/// g(s) = max(s, -M): the unit atom on the sphere of radius e^{-M}.
inline RadialProfile truncated_log(double M, int n) {
    if (!(M > 0.0)) throw std::invalid_argument("truncated_log: M must be positive");
    RadialProfile::Impl im;
    im.g = [M](double s) { return std::max(s, -M); };
    im.gpl = [M](double s) { return s > -M ? 1.0 : 0.0; };
    im.gpr = [M](double s) { return s >= -M ? 1.0 : 0.0; };
    im.ginv = [M](double v) { return v > -M ? v : -kInf; };
    im.g_min = -M;
    im.breakpoints = {-M};
    im.n = n;
    im.kind = "trunc";
    im.params = {{"M", M}};
    return RadialProfile::from_impl(std::move(im));
}

namespace detail {

/// L_k and the shift constants C_1 = 1, C_{k+1} = exp(C_k), chosen so the
/// iterated-log profile has zero boundary value.
inline double iterlog_shift(int k) {
    double c = 1.0;
    for (int i = 1; i < k; ++i) c = std::exp(c);
    return c;
}

}  // namespace detail

/// g(s) = -L_k(C_k - s): phi_k = -L_k(-log|z| + C_k), unbounded with very
/// slowly decaying sublevel sets.
inline RadialProfile iterated_log_profile(int k, int n) {
    if (k < 1) throw std::invalid_argument("iterated_log_profile: k must be >= 1");
    const double C = detail::iterlog_shift(k);
    RadialProfile::Impl im;
    im.g = [k, C](double s) {
        double v = C - s;
        for (int i = 0; i < k; ++i) v = std::log(v);
        return -v;
    };
    auto deriv = [k, C](double s) {
        double x = C - s;
        double d = 1.0;
        for (int i = 0; i < k; ++i) {
            d /= x;
            x = std::log(x);
        }
        return d;
    };
    im.gpl = im.gpr = deriv;
    im.ginv = [k, C](double v) {
        double x = -v;
        for (int i = 0; i < k; ++i) {
            x = std::exp(x);
            if (!std::isfinite(x)) return -kInf;
        }
        return C - x;
    };
    im.n = n;
    im.kind = "iterlog";
    im.params = {{"k", double(k)}};
    return RadialProfile::from_impl(std::move(im));
}

/// g(s) = -(-s)^alpha with alpha in (0, 1]; alpha < 1 has unbounded total
/// Monge-Ampere mass (the derivative blows up at the boundary).
inline RadialProfile power_profile(double alpha, int n) {
    if (!(alpha > 0.0) || alpha > 1.0)
        throw std::invalid_argument("power_profile: alpha must lie in (0, 1]");
    RadialProfile::Impl im;
    im.g = [alpha](double s) { return s == 0.0 ? 0.0 : -std::pow(-s, alpha); };
    auto deriv = [alpha](double s) { return alpha * std::pow(-s, alpha - 1.0); };
    im.gpl = im.gpr = deriv;
    im.ginv = [alpha](double v) { return -std::pow(-v, 1.0 / alpha); };
    im.n = n;
    im.kind = "power";
    im.params = {{"alpha", alpha}};
    return RadialProfile::from_impl(std::move(im));
}

/// g(s) = e^{a s} - 1: a smooth bounded profile with density 2a^n e^{...}.
inline RadialProfile exp_profile(double a, int n) {
    if (!(a > 0.0)) throw std::invalid_argument("exp_profile: a must be positive");
    RadialProfile::Impl im;
    im.g = [a](double s) { return std::expm1(a * s); };
    auto deriv = [a](double s) { return a * std::exp(a * s); };
    im.gpl = im.gpr = deriv;
    im.ginv = [a](double v) { return v > -1.0 ? std::log1p(v) / a : -kInf; };
    im.g_min = -1.0;
    im.n = n;
    im.kind = "expo";
    im.params = {{"a", a}};
    return RadialProfile::from_impl(std::move(im));
}

/// max(g, -M): truncation at depth M.
inline RadialProfile truncate(const RadialProfile& base, double M) {
    if (!(M > 0.0)) throw std::invalid_argument("truncate: M must be positive");
    if (base.g_min() >= -M) return base;
    const double sM = base.ginv(-M);
    RadialProfile::Impl im;
    im.g = [base, M](double s) { return std::max(base.g(s), -M); };
    im.gpl = [base, sM](double s) { return s > sM ? base.gprime_left(s) : 0.0; };
    im.gpr = [base, sM](double s) { return s >= sM ? base.gprime_right(s) : 0.0; };
    im.ginv = [base, M](double v) { return v > -M ? base.ginv(v) : -kInf; };
    im.g_min = -M;
    im.breakpoints.push_back(sM);
    for (double b : base.breakpoints())
        if (b > sM) im.breakpoints.push_back(b);
    im.s_max = base.s_max();
    im.n = base.dim();
    im.kind = "truncate";
    im.params = {{"M", M}};
    im.children = {base};
    return RadialProfile::from_impl(std::move(im));
}

/// max(g, j s): the standard exhaustion with the radial gauge log|z|.
inline RadialProfile exhaustion(const RadialProfile& base, double j) {
    if (!(j >= 1.0)) throw std::invalid_argument("exhaustion: j must be >= 1");
    if (base.s_max() != 0.0)
        throw std::invalid_argument("exhaustion: base must live on the unit ball");
    auto gamma = [&](double s) { return base.g(s) - j * s; };
    if (base.gprime_left(0.0) - j <= 1e-14) return base;  // line never wins

    // gamma is convex, 0 at 0 and negative just left of 0: bisect the crossing
    double a = -1.0;
    int guard = 0;
    while (gamma(a) < 0.0) {
        a *= 2.0;
        if (++guard > 70) return base;
    }
    double lo = a, hi = a / 2.0;
    for (int i = 0; i < 200 && hi - lo > 1e-14 * std::max(1.0, -lo); ++i) {
        const double mid = 0.5 * (lo + hi);
        (gamma(mid) >= 0.0 ? lo : hi) = mid;
    }
    const double s1 = 0.5 * (lo + hi);

    RadialProfile::Impl im;
    im.g = [base, j](double s) { return std::max(base.g(s), j * s); };
    im.gpl = [base, j, s1](double s) { return s > s1 ? j : base.gprime_left(s); };
    im.gpr = [base, j, s1](double s) { return s >= s1 ? j : base.gprime_right(s); };
    im.ginv = [base, j, s1](double v) { return v > j * s1 ? v / j : base.ginv(v); };
    im.g_min = base.g_min();
    im.breakpoints.push_back(s1);
    for (double b : base.breakpoints())
        if (b < s1) im.breakpoints.push_back(b);
    im.n = base.dim();
    im.kind = "exhaustion";
    im.params = {{"j", j}};
    im.children = {base};
    return RadialProfile::from_impl(std::move(im));
}

/// alpha * g for alpha > 0.
inline RadialProfile scale_profile(const RadialProfile& base, double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("scale_profile: alpha must be positive");
    RadialProfile::Impl im;
    im.g = [base, alpha](double s) { return alpha * base.g(s); };
    im.gpl = [base, alpha](double s) { return alpha * base.gprime_left(s); };
    im.gpr = [base, alpha](double s) { return alpha * base.gprime_right(s); };
    im.ginv = [base, alpha](double v) { return base.ginv(v / alpha); };
    im.g_min = alpha * base.g_min();
    im.breakpoints = base.breakpoints();
    im.s_max = base.s_max();
    im.n = base.dim();
    im.kind = "scale";
    im.params = {{"alpha", alpha}};
    im.children = {base};
    return RadialProfile::from_impl(std::move(im));
}

/// sum_i c_i g_i with positive coefficients (a convex combination when the
/// coefficients sum to at most 1).
inline RadialProfile superpose(const std::vector<std::pair<double, RadialProfile>>& terms) {
    if (terms.empty()) throw std::invalid_argument("superpose: empty term list");
    const int n = terms.front().second.dim();
    const double s_max = terms.front().second.s_max();
    for (const auto& [c, p] : terms) {
        if (!(c > 0.0)) throw std::invalid_argument("superpose: coefficients must be positive");
        if (p.dim() != n || p.s_max() != s_max)
            throw std::invalid_argument("superpose: mixed dimensions or domains");
    }
    auto list = std::make_shared<const std::vector<std::pair<double, RadialProfile>>>(terms);
    RadialProfile::Impl im;
    im.g = [list](double s) {
        double v = 0.0;
        for (const auto& [c, p] : *list) v += c * p.g(s);
        return v;
    };
    im.gpl = [list](double s) {
        double v = 0.0;
        for (const auto& [c, p] : *list) v += c * p.gprime_left(s);
        return v;
    };
    im.gpr = [list](double s) {
        double v = 0.0;
        for (const auto& [c, p] : *list) v += c * p.gprime_right(s);
        return v;
    };
    double gmin = 0.0;
    for (const auto& [c, p] : terms) gmin += c * p.g_min();
    im.g_min = gmin;
    for (const auto& [c, p] : terms)
        for (double b : p.breakpoints()) im.breakpoints.push_back(b);
    im.s_max = s_max;
    im.n = n;
    im.kind = "superpose";
    for (std::size_t i = 0; i < terms.size(); ++i) {
        im.params["c" + std::to_string(i)] = terms[i].first;
        im.children.push_back(terms[i].second);
    }
    return RadialProfile::from_impl(std::move(im));
}

// -- radial measures ----------------------------------------------------------

/// Radial positive measure described by its mass profile: mass(s) is the
/// measure of the closed ball of radius e^s.
class RadialMeasure {
public:
    double mass(double s) const {
        if (std::isinf(s) && s < 0.0) return 0.0;
        return impl_->factor * impl_->mass(std::min(s, impl_->s_max));
    }
    double mass_left(double s) const {
        if (std::isinf(s) && s < 0.0) return 0.0;
        return impl_->factor * impl_->mass_left(std::min(s, impl_->s_max));
    }
    double total() const { return mass(impl_->s_max); }
    const std::vector<double>& breakpoints() const { return impl_->breakpoints; }
    double s_max() const { return impl_->s_max; }
    const std::string& kind() const { return impl_->kind; }
    const std::map<std::string, double>& params() const { return impl_->params; }
    double factor() const { return impl_->factor; }

    /// The same measure scaled by c (mu/2 is scaled(0.5)).
    RadialMeasure scaled(double c) const {
        if (!(c >= 0.0)) throw std::invalid_argument("RadialMeasure::scaled: negative factor");
        Impl im = *impl_;
        im.factor *= c;
        RadialMeasure m;
        m.impl_ = std::make_shared<const Impl>(std::move(im));
        return m;
    }

    struct Impl {
        std::function<double(double)> mass;
        std::function<double(double)> mass_left;
        std::vector<double> breakpoints;
        double s_max = 0.0;
        double factor = 1.0;
        std::string kind;
        std::map<std::string, double> params;
    };

    static RadialMeasure from_impl(Impl impl) {
        if (!impl.mass_left) impl.mass_left = impl.mass;
        std::sort(impl.breakpoints.begin(), impl.breakpoints.end());
        RadialMeasure m;
        m.impl_ = std::make_shared<const Impl>(std::move(impl));
        return m;
    }

private:
    RadialMeasure() = default;
    std::shared_ptr<const Impl> impl_;
};

/// Point mass on the sphere of radius e^{s0}.
inline RadialMeasure atom_measure(double s0, double mass) {
    if (!(s0 <= 0.0)) throw std::invalid_argument("atom_measure: s0 must be <= 0");
    if (!(mass >= 0.0)) throw std::invalid_argument("atom_measure: negative mass");
    RadialMeasure::Impl im;
    im.mass = [s0, mass](double s) { return s >= s0 ? mass : 0.0; };
    im.mass_left = [s0, mass](double s) { return s > s0 ? mass : 0.0; };
    im.breakpoints = {s0};
    im.kind = "atom";
    im.params = {{"s", s0}, {"mass", mass}};
    return RadialMeasure::from_impl(std::move(im));
}

/// Lebesgue-like measure: mass(s) = scale * e^{2 n s} (the volume profile).
inline RadialMeasure lebesgue_measure(int n, double scale = 1.0) {
    if (n < 1) throw std::invalid_argument("lebesgue_measure: n must be >= 1");
    if (!(scale > 0.0)) throw std::invalid_argument("lebesgue_measure: scale must be positive");
    RadialMeasure::Impl im;
    im.mass = im.mass_left = [n, scale](double s) { return scale * std::exp(2.0 * n * s); };
    im.kind = "lebesgue";
    im.params = {{"n", double(n)}, {"scale", scale}};
    return RadialMeasure::from_impl(std::move(im));
}

/// Monge-Ampere measure of a profile: mass of the closed ball e^s is
/// gprime_right(s)^n, with atoms exactly at the convexity kinks.
inline RadialMeasure ma_measure(const RadialProfile& p) {
    const double n = p.dim();
    RadialMeasure::Impl im;
    im.mass = [p, n](double s) { return std::pow(p.gprime_right(s), n); };
    im.mass_left = [p, n](double s) { return std::pow(p.gprime_left(s), n); };
    im.breakpoints = p.breakpoints();
    im.s_max = p.s_max();
    im.kind = "ma:" + p.kind();
    im.params = p.params();
    return RadialMeasure::from_impl(std::move(im));
}

/// Piecewise-linear mass profile through (s, m) rows; a repeated s encodes an
/// atom on that sphere.  Rows must be sorted with nondecreasing masses.
inline RadialMeasure measure_from_table(std::vector<std::pair<double, double>> rows) {
    if (rows.empty()) throw std::invalid_argument("measure_from_table: empty table");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!(rows[i].second >= 0.0))
            throw std::invalid_argument("measure_from_table: negative mass");
        if (i > 0 && rows[i].first < rows[i - 1].first)
            throw std::invalid_argument("measure_from_table: rows not sorted by s");
        if (i > 0 && rows[i].second < rows[i - 1].second - 1e-12)
            throw std::invalid_argument("measure_from_table: mass profile must be nondecreasing");
    }
    auto tab = std::make_shared<const std::vector<std::pair<double, double>>>(std::move(rows));
    auto eval = [tab](double s, bool left) {
        const auto& t = *tab;
        if (s < t.front().first) return 0.0;
        if (s >= t.back().first) return t.back().second;
        // rightmost row with row.s <= s; for the left limit, exclude rows at s
        std::size_t idx = 0;
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (t[i].first < s || (!left && t[i].first == s))
                idx = i;
            else if (t[i].first > s)
                break;
        }
        const auto& [s0, m0] = t[idx];
        if (idx + 1 >= t.size()) return m0;
        const auto& [s1, m1] = t[idx + 1];
        if (s1 == s0 || s <= s0) return m0;
        return m0 + (m1 - m0) * (s - s0) / (s1 - s0);
    };
    RadialMeasure::Impl im;
    im.mass = [eval](double s) { return eval(s, false); };
    im.mass_left = [eval](double s) { return eval(s, true); };
    for (const auto& [s, m] : *tab) im.breakpoints.push_back(s);
    im.s_max = tab->back().first < 0.0 ? 0.0 : tab->back().first;
    im.kind = "table";
    return RadialMeasure::from_impl(std::move(im));
}

// -- the exactly-solvable distributions ---------------------------------------

/// F(t) = mu_phi(phi < -t) = gprime_left(ginv(-t))^n.
inline DistributionFunction ma_distribution(const RadialProfile& p) {
    const double n = p.dim();
    const double t_max = -p.g_min();
    DistributionFunction::Options opts;
    opts.t_max = t_max;
    for (double sb : p.breakpoints()) {
        const double lo = p.gprime_left(sb), hi = p.gprime_right(sb);
        if (hi > lo) {
            const double tb = -p.g(sb);
            if (tb > 0.0 && tb <= t_max)
                opts.jumps.push_back({tb, std::pow(hi, n), std::pow(lo, n)});
        }
    }
    opts.log_fn = [p, n](double t) {
        const double d = p.gprime_left(p.ginv(-t));
        return d > 0.0 ? n * std::log(d) : -kInf;
    };
    opts.tail = std::isfinite(t_max) ? DistributionFunction::Tail::compact
                                     : DistributionFunction::Tail::generic;
    return DistributionFunction::from_function(
        [p, n](double t) { return std::pow(p.gprime_left(p.ginv(-t)), n); }, std::move(opts));
}

/// F(t) = Cap(phi < -t) = |ginv(-t) - s_max|^{-n}; blows up as t -> 0 and is
/// the model identity Cap(B(e^{-t})) = t^{-n} for g(s) = s.
inline DistributionFunction cap_distribution(const RadialProfile& p) {
    const double n = p.dim();
    const double t_max = -p.g_min();
    const double smax = p.s_max();
    auto value = [p, n, smax](double t) {
        const double s = p.ginv(-t);
        if (std::isinf(s)) return 0.0;
        return std::pow(smax - s, -n);
    };
    DistributionFunction::Options opts;
    opts.t_max = t_max;
    for (double sb : p.breakpoints()) {
        if (p.gprime_left(sb) == 0.0 && p.gprime_right(sb) > 0.0) {
            const double tb = -p.g(sb);
            if (tb > 0.0 && tb <= t_max)
                opts.jumps.push_back({tb, std::pow(smax - sb, -n), value(tb)});
        }
    }
    opts.log_fn = [p, n, smax](double t) {
        const double s = p.ginv(-t);
        if (std::isinf(s)) return -kInf;
        return -n * std::log(smax - s);
    };
    opts.tail = std::isfinite(t_max) ? DistributionFunction::Tail::compact
                                     : DistributionFunction::Tail::generic;
    return DistributionFunction::from_function(value, std::move(opts));
}

/// F(t) = Vol(phi < -t) = V1 e^{2 n ginv(-t)}.
inline DistributionFunction vol_distribution(const RadialProfile& p, double V1 = 1.0) {
    const double n = p.dim();
    const double t_max = -p.g_min();
    auto value = [p, n, V1](double t) {
        const double s = p.ginv(-t);
        return std::isinf(s) ? 0.0 : V1 * std::exp(2.0 * n * s);
    };
    DistributionFunction::Options opts;
    opts.t_max = t_max;
    for (double sb : p.breakpoints()) {
        if (p.gprime_left(sb) == 0.0 && p.gprime_right(sb) > 0.0) {
            const double tb = -p.g(sb);
            if (tb > 0.0 && tb <= t_max)
                opts.jumps.push_back({tb, V1 * std::exp(2.0 * n * sb), value(tb)});
        }
    }
    opts.log_fn = [p, n, V1](double t) {
        const double s = p.ginv(-t);
        return std::isinf(s) ? -kInf : std::log(V1) + 2.0 * n * s;
    };
    return DistributionFunction::from_function(value, std::move(opts));
}

/// F(t) = mu(phi < -t) for an arbitrary radial measure: the sublevel set is
/// the open ball of radius e^{ginv(-t)}.
inline DistributionFunction sublevel_distribution(const RadialMeasure& mu, const RadialProfile& p) {
    const double t_max = -p.g_min();
    auto value = [mu, p](double t) { return mu.mass_left(p.ginv(-t)); };
    DistributionFunction::Options opts;
    opts.t_max = t_max;
    for (double sb : p.breakpoints()) {
        const double tb = -p.g(sb);
        if (tb > 0.0 && tb <= t_max && p.gprime_left(sb) == 0.0 && p.gprime_right(sb) > 0.0)
            opts.jumps.push_back({tb, mu.mass_left(sb), value(tb)});
    }
    for (double sa : mu.breakpoints()) {
        if (sa > p.s_max()) continue;
        const double ta = -p.g(sa);
        if (ta > 0.0 && ta <= t_max && mu.mass(sa) > mu.mass_left(sa))
            opts.jumps.push_back({ta, mu.mass(sa), mu.mass_left(sa)});
    }
    return DistributionFunction::from_function(value, std::move(opts));
}

// -- energies ------------------------------------------------------------------

/// E(phi): Luxembourg norm of -phi against its own Monge-Ampere measure.
inline NormResult energy(const RadialProfile& p, const Weight& w, const QuadratureSpec& spec = {}) {
    return luxembourg_norm(ma_distribution(p), w, spec);
}

/// J(phi): Choquet norm of -phi under the capacity, driven by the tilde
/// transform of the weight; the t^{-n} blow-up of the capacity at 0 is
/// cancelled exactly by the t^n factor in h~'.
inline NormResult j_energy(const RadialProfile& p, const Weight& w, const QuadratureSpec& spec = {}) {
    return choquet_norm(cap_distribution(p), tilde(w, p.dim()), spec);
}

/// Luxembourg norm of -phi against an arbitrary radial measure.
inline NormResult orlicz_norm_against(const RadialMeasure& mu, const RadialProfile& p,
                                      const Weight& w, const QuadratureSpec& spec = {}) {
    return luxembourg_norm(sublevel_distribution(mu, p), w, spec);
}

// -- Dirichlet solver ------------------------------------------------------------

/// Solves MA(phi) = mu radially: g(s) = -int_s^0 mass(sigma)^{1/n} dsigma.
/// The result reproduces mu exactly through gprime_right = mass^{1/n}; an
/// infinite tail integral yields an unbounded solution (allowed).
inline RadialProfile dirichlet_solve(const RadialMeasure& mu, int n,
                                     const QuadratureSpec& spec = {}) {
    if (n < 1) throw std::invalid_argument("dirichlet_solve: n must be >= 1");
    {
        std::vector<double> probe = mu.breakpoints();
        for (int i = 0; i <= 32; ++i) probe.push_back(mu.s_max() - std::pow(2.0, i / 4.0) + 1.0);
        std::sort(probe.begin(), probe.end());
        double up = -kInf;
        for (double s : probe) {
            if (s > mu.s_max()) continue;
            const double m = mu.mass(s);
            if (m < up - 1e-12 * std::max(1.0, up))
                throw std::invalid_argument("dirichlet_solve: mass profile is not nondecreasing");
            up = std::max(up, m);
        }
    }

    const double s_max = mu.s_max();
    auto r = [mu, n](double s) { return std::pow(mu.mass(s), 1.0 / n); };

    // grid: measure breakpoints + geometric refinement toward -inf
    std::vector<double> grid;
    grid.push_back(s_max);
    for (double b : mu.breakpoints())
        if (b < s_max) grid.push_back(b);
    for (int i = 0; i <= 160; ++i) grid.push_back(s_max - std::pow(2.0, i / 8.0) + 1.0);
    std::sort(grid.begin(), grid.end(), std::greater<double>());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    auto cells = std::make_shared<std::vector<std::pair<double, double>>>();  // (s_k, cumulative)
    cells->push_back({s_max, 0.0});
    double cum = 0.0;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        auto piece = integrate_adaptive(r, grid[i + 1], grid[i], spec);
        cum += piece.value;
        cells->push_back({grid[i + 1], cum});
    }
    const double s_last = grid.back();

    // tail below the grid: either the mass has died out (bounded solution)
    // or we extend affinely with the limiting slope
    const double r_last = r(s_last);
    double g_min = -kInf;
    if (mu.mass(s_last) == 0.0) g_min = -cum;

    auto cells_c = std::shared_ptr<const std::vector<std::pair<double, double>>>(cells);
    auto geval = [cells_c, mu, n, r, s_last, r_last, spec](double s) -> double {
        const auto& cs = *cells_c;
        if (s >= cs.front().first) return 0.0;
        if (s < s_last) {
            if (mu.mass(s_last) == 0.0) return -cs.back().second;
            return -(cs.back().second + r_last * (s_last - s));
        }
        // cells are ordered by decreasing s
        std::size_t lo = 0, hi = cs.size() - 1;
        while (lo + 1 < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (cs[mid].first >= s)
                lo = mid;
            else
                hi = mid;
        }
        auto piece = integrate_adaptive(r, s, cs[lo].first, spec);
        return -(cs[lo].second + piece.value);
    };

    RadialProfile::Impl im;
    im.g = geval;
    im.gpl = [mu, n](double s) { return std::pow(mu.mass_left(s), 1.0 / n); };
    im.gpr = [mu, n](double s) { return std::pow(mu.mass(s), 1.0 / n); };
    im.g_min = g_min;
    im.breakpoints = mu.breakpoints();
    im.s_max = s_max;
    im.n = n;
    im.kind = "solved";
    return RadialProfile::from_impl(std::move(im));
}

// -- subextension -----------------------------------------------------------------

/// Maximal radial subextension to the ball of radius R = e^{logR}: keeps g up
/// to the contact point s*, then follows the support line through (logR, 0)
/// with the smallest feasible slope m* = sup_{s<=0} g(s)/(s - logR).  The
/// Monge-Ampere measure of the result vanishes outside the closed unit ball.
inline RadialProfile subextension(const RadialProfile& base, double logR) {
    if (!(logR > 0.0)) throw std::invalid_argument("subextension: logR must be positive");
    if (base.s_max() != 0.0)
        throw std::invalid_argument("subextension: base must live on the unit ball");
    if (base.g_min() == 0.0) return zero_profile(base.dim(), logR);

    auto ratio = [&](double s) {
        const double v = base.g(s);
        return v / (s - logR);
    };

    std::vector<double> cands = base.breakpoints();
    for (int i = 0; i <= 240; ++i) cands.push_back(-std::pow(10.0, -6.0 + i / 20.0));
    std::sort(cands.begin(), cands.end());
    double best_s = cands.front(), best_r = -kInf;
    for (double s : cands) {
        if (s > 0.0) continue;
        const double v = ratio(s);
        if (v > best_r) {
            best_r = v;
            best_s = s;
        }
    }
    // refine between grid neighbours (the ratio is unimodal)
    double lo = best_s, hi = best_s;
    for (double s : cands) {
        if (s < best_s) lo = s;
        if (s > best_s && hi == best_s && s <= 0.0) hi = s;
    }
    auto refined = golden_section_max(ratio, lo, hi, 200, 1e-14);
    double m_star = best_r, s_star = best_s;
    if (refined.value > best_r) {
        m_star = refined.value;
        s_star = refined.x;
    }
    if (!(m_star > 0.0)) return zero_profile(base.dim(), logR);

    RadialProfile::Impl im;
    im.g = [base, m_star, s_star, logR](double s) {
        return s <= s_star ? base.g(s) : m_star * (s - logR);
    };
    im.gpl = [base, m_star, s_star](double s) {
        return s > s_star ? m_star : base.gprime_left(s);
    };
    im.gpr = [base, m_star, s_star](double s) {
        return s >= s_star ? m_star : base.gprime_right(s);
    };
    const double v_star = m_star * (s_star - logR);
    im.ginv = [base, m_star, logR, v_star](double v) {
        return v >= v_star ? logR + v / m_star : base.ginv(v);
    };
    im.g_min = base.g_min();
    im.breakpoints.push_back(s_star);
    for (double b : base.breakpoints())
        if (b < s_star) im.breakpoints.push_back(b);
    im.s_max = logR;
    im.n = base.dim();
    im.kind = "subext";
    im.params = {{"logR", logR}, {"slope", m_star}, {"contact", s_star}};
    im.children = {base};
    return RadialProfile::from_impl(std::move(im));
}

}  // namespace pshlab
