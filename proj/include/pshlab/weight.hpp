#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "pshlab/distribution.hpp"
#include "pshlab/numeric.hpp"
#include "pshlab/quadrature.hpp"

namespace pshlab {

/// Thrown by witness_weight when the input sublevel-mass profile vanishes at
/// finite height: the underlying function is bounded and no witness exists.
struct BoundedInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Piecewise-constant derivative table: value `values[i]` on
/// [breakpoints[i], breakpoints[i+1]), the last piece extending to +inf.
struct PiecewiseDerivative {
    std::vector<double> breakpoints;  // b0 = 0 < b1 < ...
    std::vector<double> values;       // nondecreasing, keeps h convex

    void validate() const {
        if (breakpoints.empty() || breakpoints.size() != values.size())
            throw std::invalid_argument("PiecewiseDerivative: size mismatch");
        if (breakpoints.front() != 0.0)
            throw std::invalid_argument("PiecewiseDerivative: first breakpoint must be 0");
        for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
            if (!(breakpoints[i] < breakpoints[i + 1]))
                throw std::invalid_argument("PiecewiseDerivative: breakpoints not increasing");
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (!(values[i] >= 0.0))
                throw std::invalid_argument("PiecewiseDerivative: negative derivative");
            if (i > 0 && values[i] < values[i - 1] * (1.0 - 1e-12))
                throw std::invalid_argument("PiecewiseDerivative: decreasing derivative breaks convexity");
        }
    }
};

/// A Young function h: convex increasing, h(0) = 0, h(s)/s -> +inf.
/// Constructors in this header either build h normalized to h'(0) = 1 (the
/// class the energies are defined over) or mark the result as unnormalized
/// (polynomial p > 1, the tilde transform).  Values are immutable and all
/// evaluators are pure, so sharing across threads is safe.
class Weight {
public:
    enum class Kind { polynomial, exponential, iterated_exponential, piecewise, tilde, witness, custom };

    double h(double t) const { return impl_->h(std::max(t, 0.0)); }
    double hprime(double t) const { return impl_->hprime(std::max(t, 0.0)); }
    double hinv(double y) const {
        if (!(y >= 0.0)) throw std::invalid_argument("Weight::hinv: negative argument");
        return impl_->hinv(y);
    }
    /// log h'(t), exact in the exponent for exponential-family kinds so that
    /// layer-cake integrands can be assembled in the log domain past the
    /// overflow point of h' itself.
    double log_hprime(double t) const { return impl_->log_hprime(std::max(t, 0.0)); }

    const std::vector<double>& breakpoints() const { return impl_->breakpoints; }
    Kind kind() const { return impl_->kind; }
    const std::map<std::string, double>& params() const { return impl_->params; }
    bool normalized() const { return impl_->normalized; }
    const std::string& name() const { return impl_->name; }

    /// Piecewise table (piecewise kind only).
    const PiecewiseDerivative& table() const {
        if (impl_->kind != Kind::piecewise)
            throw std::logic_error("Weight::table: not a piecewise weight");
        return impl_->table;
    }
    /// Sublevel-mass profile a witness weight was built from (witness kind only).
    const DistributionFunction& witness_eps() const {
        if (impl_->kind != Kind::witness)
            throw std::logic_error("Weight::witness_eps: not a witness weight");
        return impl_->eps;
    }
    /// Base weight and dimension of a tilde transform (tilde kind only).
    const Weight& tilde_base() const {
        if (impl_->kind != Kind::tilde || !impl_->base)
            throw std::logic_error("Weight::tilde_base: not a tilde weight");
        return *impl_->base;
    }
    int tilde_dim() const {
        if (impl_->kind != Kind::tilde)
            throw std::logic_error("Weight::tilde_dim: not a tilde weight");
        return static_cast<int>(impl_->params.at("n"));
    }

private:
    struct Impl {
        std::function<double(double)> h;
        std::function<double(double)> hprime;
        std::function<double(double)> hinv;
        std::function<double(double)> log_hprime;
        std::vector<double> breakpoints;
        Kind kind = Kind::custom;
        std::map<std::string, double> params;
        bool normalized = true;
        std::string name;
        PiecewiseDerivative table;
        DistributionFunction eps;
        std::shared_ptr<const Weight> base;
    };

    explicit Weight(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;

    friend Weight make_weight_from_impl(Weight::Kind, std::string,
                                        std::map<std::string, double>,
                                        std::function<double(double)>,
                                        std::function<double(double)>,
                                        std::function<double(double)>,
                                        std::function<double(double)>,
                                        std::vector<double>, bool,
                                        PiecewiseDerivative, DistributionFunction,
                                        std::shared_ptr<const Weight>);
};

namespace detail {

/// Monotone inverse of a convex increasing h by bracketing + bisection.
inline double generic_hinv(const std::function<double(double)>& h, double y) {
    if (y <= 0.0) return 0.0;
    if (std::isinf(y)) return kInf;
    double hi = 1.0;
    int guard = 0;
    while (h(hi) < y) {
        hi *= 2.0;
        if (++guard > 1100 || !std::isfinite(hi)) return kInf;
    }
    double lo = hi > 1.0 ? hi / 2.0 : 0.0;
    return bisect_nondecreasing([&](double t) { return h(t); }, lo, hi, y, 1e-14, 240);
}

}  // namespace detail

inline std::function<double(double)> impl_hinv_or_default(const std::function<double(double)>& h,
                                                          std::function<double(double)> hinv) {
    if (hinv) return hinv;
    return [h](double y) { return detail::generic_hinv(h, y); };
}

inline Weight make_weight_from_impl(Weight::Kind kind, std::string name,
                                    std::map<std::string, double> params,
                                    std::function<double(double)> h,
                                    std::function<double(double)> hprime,
                                    std::function<double(double)> hinv,
                                    std::function<double(double)> log_hprime,
                                    std::vector<double> breakpoints, bool normalized,
                                    PiecewiseDerivative table = {},
                                    DistributionFunction eps = {},
                                    std::shared_ptr<const Weight> base = nullptr) {
    auto impl = std::make_shared<Weight::Impl>();
    impl->kind = kind;
    impl->name = std::move(name);
    impl->params = std::move(params);
    impl->h = std::move(h);
    impl->hprime = std::move(hprime);
    impl->hinv = impl_hinv_or_default(impl->h, std::move(hinv));
    impl->log_hprime = log_hprime
        ? std::move(log_hprime)
        : [hp = impl->hprime](double t) { const double v = hp(t); return v > 0.0 ? std::log(v) : -kInf; };
    impl->breakpoints = std::move(breakpoints);
    impl->normalized = normalized;
    impl->table = std::move(table);
    impl->eps = std::move(eps);
    impl->base = std::move(base);
    return Weight(impl);
}

// -- constructors -----------------------------------------------------------

/// h(t) = t^p / p with p >= 1.  Not normalized for p > 1 (h'(0) = 0 there).
inline Weight polynomial_weight(double p) {
    if (!(p >= 1.0))
        throw std::invalid_argument("polynomial_weight: p must be >= 1");
    return make_weight_from_impl(
        Weight::Kind::polynomial, "poly", {{"p", p}},
        [p](double t) { return std::pow(t, p) / p; },
        [p](double t) { return std::pow(t, p - 1.0); },
        [p](double y) { return std::pow(p * y, 1.0 / p); },
        [p](double t) { return t > 0.0 ? (p - 1.0) * std::log(t) : (p == 1.0 ? 0.0 : -kInf); },
        {}, p == 1.0);
}

/// h(t) = e^t - 1.
inline Weight exponential_weight() {
    return make_weight_from_impl(
        Weight::Kind::exponential, "exp", {},
        [](double t) { return std::expm1(t); },
        [](double t) { return std::exp(t); },
        [](double y) { return std::log1p(y); },
        [](double t) { return t; },
        {}, true);
}

namespace detail {

inline double iter_exp(int k, double t) {
    double v = t;
    for (int i = 0; i < k; ++i) v = std::exp(v);
    return v;
}
inline double iter_log(int k, double v) {
    for (int i = 0; i < k; ++i) v = std::log(v);
    return v;
}

}  // namespace detail

/// Affinely normalized k-th iterated exponential:
/// h(t) = (e_k(t) - e_k(0)) / e_k'(0), so h(0) = 0 and h'(0) = 1.
inline Weight iterated_exp_weight(int k) {
    if (k < 1) throw std::invalid_argument("iterated_exp_weight: k must be >= 1");
    double shift = detail::iter_exp(k, 0.0);
    double scale = 1.0;
    for (int i = 1; i < k; ++i) scale *= detail::iter_exp(i, 0.0);
    scale *= shift;  // e_k'(0) = e_k(0) * e_{k-1}(0) * ... * e_1(0)
    return make_weight_from_impl(
        Weight::Kind::iterated_exponential, "iterexp", {{"k", double(k)}},
        [k, shift, scale](double t) { return (detail::iter_exp(k, t) - shift) / scale; },
        [k, scale](double t) {
            double v = 1.0;
            for (int i = 1; i <= k; ++i) v *= detail::iter_exp(i, t);
            return v / scale;
        },
        [k, shift, scale](double y) {
            const double target = y * scale + shift;
            return std::isfinite(target) ? detail::iter_log(k, target) : kInf;
        },
        [k, scale](double t) {
            double lg = -std::log(scale);
            double e = t;  // e_0(t); log e_i(t) = e_{i-1}(t)
            for (int i = 1; i <= k; ++i) {
                lg += e;
                if (i < k) e = std::exp(e);
                if (!std::isfinite(lg)) break;
            }
            return lg;
        },
        {}, true);
}

/// Affine renormalization of a raw convex generator: h = (H - H(0)) / H'(0).
/// Rejects H'(0) <= 0 and derivative decreases detected on the probe grid.
inline Weight normalize(std::function<double(double)> H, std::function<double(double)> Hprime,
                        std::string name = "custom") {
    const double d0 = Hprime(0.0);
    if (!(d0 > 0.0))
        throw std::invalid_argument("normalize: H'(0) must be positive");
    static const double probe[] = {0.0, 1e-3, 1e-2, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0, 100.0};
    double prev = -kInf;
    for (double t : probe) {
        const double d = Hprime(t);
        if (!std::isfinite(d)) break;
        if (d < prev * (1.0 - 1e-9) - 1e-12)
            throw std::invalid_argument("normalize: derivative decreases, generator is not convex");
        prev = d;
    }
    const double shift = H(0.0);
    auto h = [H, shift, d0](double t) { return (H(t) - shift) / d0; };
    return make_weight_from_impl(
        Weight::Kind::custom, std::move(name), {},
        h,
        [Hprime, d0](double t) { return Hprime(t) / d0; },
        nullptr, nullptr, {}, true);
}

/// The transform h~(s) = int_0^s t^n h'(t) dt pairing the Monge-Ampere energy
/// with its capacity counterpart.  h~'(t) = t^n h'(t) is exact; h~ itself is
/// closed-form for polynomial and exponential bases and quadrature otherwise.
inline Weight tilde(const Weight& w, int n) {
    if (n < 1) throw std::invalid_argument("tilde: dimension must be >= 1");
    auto base = std::make_shared<const Weight>(w);
    const double nd = n;

    std::function<double(double)> hfun;
    if (w.kind() == Weight::Kind::polynomial) {
        const double p = w.params().at("p");
        hfun = [p, nd](double s) { return std::pow(s, nd + p) / (nd + p); };
    } else if (w.kind() == Weight::Kind::exponential) {
        // I_m(s) = int_0^s u^m e^u du; series near 0, recursion elsewhere.
        hfun = [n](double s) {
            if (s <= 0.0) return 0.0;
            if (s < 0.5) {
                double term = std::pow(s, n + 1.0) / (n + 1.0);
                double sum = term;
                for (int m = 1; m < 40; ++m) {
                    term *= s * (n + m) / (m * (n + m + 1.0));
                    sum += term;
                    if (term < 1e-18 * sum) break;
                }
                return sum;
            }
            const double es = std::exp(s);
            double im = es - 1.0;  // I_0
            for (int m = 1; m <= n; ++m) im = std::pow(s, m) * es - m * im;
            return im;
        };
    } else if (w.kind() == Weight::Kind::piecewise) {
        auto tab = w.table();
        hfun = [tab, nd](double s) {
            double acc = 0.0;
            for (std::size_t i = 0; i < tab.breakpoints.size(); ++i) {
                const double a = tab.breakpoints[i];
                if (a >= s) break;
                const double b = (i + 1 < tab.breakpoints.size()) ? std::min(tab.breakpoints[i + 1], s) : s;
                acc += tab.values[i] * (std::pow(b, nd + 1.0) - std::pow(a, nd + 1.0)) / (nd + 1.0);
            }
            return acc;
        };
    } else {
        QuadratureSpec qs;
        hfun = [base, nd, qs](double s) {
            if (s <= 0.0) return 0.0;
            auto f = [&](double t) { return std::pow(t, nd) * base->hprime(t); };
            return integrate_split(f, 0.0, s, base->breakpoints(), qs).value;
        };
    }

    return make_weight_from_impl(
        Weight::Kind::tilde, "tilde(" + w.name() + ")",
        {{"n", nd}}, hfun,
        [base, nd](double t) { return std::pow(t, nd) * base->hprime(t); },
        nullptr,
        [base, nd](double t) {
            return t > 0.0 ? nd * std::log(t) + base->log_hprime(t) : -kInf;
        },
        w.breakpoints(), false, {}, {}, base);
}

/// Legendre transform theta*(s) = sup_{t>=0} (s t - theta(t)) of a convex
/// superlinear theta, by golden-section search on a doubling bracket.
inline double legendre_transform(const std::function<double(double)>& theta, double s) {
    if (!(s >= 0.0)) throw std::invalid_argument("legendre_transform: s must be >= 0");
    auto obj = [&](double t) { return s * t - theta(t); };
    double hi = 1.0;
    for (int i = 0; i < 64; ++i) {
        auto r = golden_section_max(obj, 0.0, hi);
        if (r.x < 0.99 * hi)
            return std::max({r.value, obj(0.0), 0.0});
        hi *= 2.0;
    }
    throw std::runtime_error("legendre_transform: maximizer escaped the bracket after 64 doublings");
}

/// Piecewise-constant-derivative Young function from an explicit table.
inline Weight piecewise_weight(PiecewiseDerivative table, std::string name = "piecewise") {
    table.validate();
    // cumulative h at breakpoints; pieces are linear so everything is exact
    std::vector<double> cum(table.breakpoints.size(), 0.0);
    for (std::size_t i = 0; i + 1 < table.breakpoints.size(); ++i)
        cum[i + 1] = cum[i] + table.values[i] * (table.breakpoints[i + 1] - table.breakpoints[i]);

    auto bp = table.breakpoints;
    auto vals = table.values;
    auto locate = [bp](double t) {
        auto it = std::upper_bound(bp.begin(), bp.end(), t);
        return static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, it - bp.begin() - 1));
    };
    const bool norm = std::abs(vals.front() - 1.0) <= 1e-12;

    return make_weight_from_impl(
        Weight::Kind::piecewise, std::move(name), {},
        [bp, vals, cum, locate](double t) {
            const std::size_t i = locate(t);
            return cum[i] + vals[i] * (t - bp[i]);
        },
        [bp, vals, locate](double t) { return vals[locate(t)]; },
        [bp, vals, cum](double y) {
            if (y <= 0.0) return 0.0;
            auto it = std::upper_bound(cum.begin(), cum.end(), y);
            const std::size_t i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, it - cum.begin() - 1));
            if (vals[i] == 0.0) return i + 1 < bp.size() ? bp[i + 1] : kInf;
            return bp[i] + (y - cum[i]) / vals[i];
        },
        nullptr, bp, norm, std::move(table));
}

/// Builds a Young function with extra growth against the tail of F:
/// a(t) = q^{-k} on [N_k, N_{k+1}) with kappa (1 - q) = 1,
/// N_{k+1} = max(2 N_k, minimal T with int_T^inf F <= q^{2(k+1)} int_0^inf F),
/// so that int a F <= kappa int F while a(t) -> +inf.
inline Weight extra_growth(const DistributionFunction& F, double kappa,
                           const QuadratureSpec& spec = {}) {
    if (!(kappa > 1.0))
        throw std::invalid_argument("extra_growth: kappa must be > 1");
    if (F.is_zero())
        throw std::invalid_argument("extra_growth: zero distribution");
    auto total = distribution_total(F, spec);
    if (total.divergent || !std::isfinite(total.value) || !(total.value > 0.0))
        throw std::invalid_argument("extra_growth: distribution has non-finite integral");
    const double I = total.value;
    const double q = (kappa - 1.0) / kappa;

    auto tail = [&](double T) { return distribution_integral(F, T, spec).value; };

    PiecewiseDerivative table;
    table.breakpoints.push_back(0.0);
    table.values.push_back(1.0);
    double Nk = 0.0;
    const int max_blocks = 48;
    for (int k = 1; k <= max_blocks; ++k) {
        const double target = std::pow(q, 2.0 * k) * I;
        double lo = Nk, hi = std::max(2.0 * Nk, 1.0);
        int guard = 0;
        while (tail(hi) > target && ++guard < 80) hi *= 2.0;
        double Tmin = (guard >= 80) ? hi
                                    : bisect_nondecreasing([&](double T) { return -tail(T); },
                                                           lo, hi, -target, 1e-12, 200);
        double next = std::max(2.0 * Nk, Tmin);
        if (!(next > Nk)) next = std::max(2.0 * Nk, Nk + 1.0);
        table.breakpoints.push_back(next);
        table.values.push_back(std::pow(q, -double(k)));
        Nk = next;
        if (Nk > 1e15) break;
    }

    Weight w = piecewise_weight(std::move(table), "extra_growth");

    // post-hoc contract: int a F <= kappa int F, up to quadrature tolerance
    auto aF = [&](double t) {
        const double f = F(t);
        return f == 0.0 ? 0.0 : w.hprime(t) * f;
    };
    std::vector<double> splits = w.breakpoints();
    for (const auto& j : F.jumps()) splits.push_back(j.t);
    IntegralResult prod;
    if (std::isfinite(F.t_max())) {
        prod = integrate_split(aF, 0.0, F.t_max(), splits, spec);
    } else {
        double T0 = 1.0;
        for (double s : splits) T0 = std::max(T0, std::min(s, 1e6));
        auto head = integrate_split(aF, 0.0, T0, splits, spec);
        auto rest = integrate_semi_infinite(aF, T0, spec, [&](double lo2, double hi2) {
            std::vector<double> in;
            for (double s : splits)
                if (s > lo2 && s < hi2) in.push_back(s);
            return in;
        });
        prod.value = head.value + rest.value;
        prod.divergent = head.divergent || rest.divergent;
    }
    if (prod.divergent || prod.value > kappa * I + 1e-6 * std::max(1.0, kappa * I))
        throw std::logic_error("extra_growth: constructed weight violates the kappa bound");
    return w;
}

/// Witness weight of an unbounded function from its sublevel-mass profile
/// eps(t): h'(t) = eps(0) / eps(2^j t) on [j, j+1).  Any positive scaling of
/// eps produces h'(0) = 1.  The layer-cake of h' against eps itself diverges,
/// which is the whole point of the construction.
inline Weight witness_weight(const DistributionFunction& eps, const QuadratureSpec& spec = {}) {
    (void)spec;
    if (std::isfinite(eps.t_max()))
        throw BoundedInput("witness_weight: sublevel masses vanish at finite height (bounded input)");
    const double eps0 = eps(0.0);
    if (!(eps0 > 0.0))
        throw std::invalid_argument("witness_weight: eps must be strictly positive");
    for (double t : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
        if (!(eps(t) > 0.0))
            throw std::invalid_argument("witness_weight: eps must be strictly positive");
        if (eps(t) > eps(t / 2.0) * (1.0 + 1e-12))
            throw std::invalid_argument("witness_weight: eps must be nonincreasing");
    }

    const int blocks = 64;
    auto hp = [eps, eps0](double t) {
        const int j = t < 0.0 ? 0 : static_cast<int>(std::floor(t));
        const double e = eps(std::ldexp(t, j));  // eps(2^j t)
        return e > 0.0 ? eps0 / e : kInf;
    };
    auto log_hp = [eps, eps0](double t) {
        const int j = t < 0.0 ? 0 : static_cast<int>(std::floor(t));
        return std::log(eps0) - eps.log_value(std::ldexp(t, j));
    };

    // cumulative block integrals of h' (saturate at inf once past overflow)
    QuadratureSpec qs;
    std::vector<double> cum(blocks + 1, 0.0);
    std::vector<double> bps;
    for (int j = 0; j <= blocks; ++j) bps.push_back(double(j));
    for (int j = 0; j < blocks; ++j) {
        if (!std::isfinite(cum[j])) {
            cum[j + 1] = kInf;
            continue;
        }
        auto piece = integrate_adaptive(hp, double(j), double(j + 1), qs);
        cum[j + 1] = cum[j] + piece.value;
    }

    auto h = [hp, cum, blocks, qs](double t) {
        if (t <= 0.0) return 0.0;
        const int j = std::min(static_cast<int>(std::floor(t)), blocks - 1);
        if (!std::isfinite(cum[j])) return kInf;
        if (t >= double(blocks)) return kInf;
        return cum[j] + integrate_adaptive(hp, double(j), t, qs).value;
    };

    // h' must be nondecreasing across block boundaries (eps nonincreasing)
    for (int j = 1; j <= 16; ++j) {
        const double below = hp(double(j) * (1.0 - 1e-10));
        const double above = hp(double(j));
        if (std::isfinite(below) && std::isfinite(above) && above < below * (1.0 - 1e-9))
            throw std::invalid_argument("witness_weight: block boundary breaks monotonicity of h'");
    }

    return make_weight_from_impl(
        Weight::Kind::witness, "witness", {}, h, hp, nullptr, log_hp,
        bps, true, {}, eps);
}

}  // namespace pshlab
