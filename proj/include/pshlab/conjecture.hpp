#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "pshlab/verify.hpp"

namespace pshlab {

/// A named 1-3 parameter family of radial profiles used by the searches.
struct ProfileFamily {
    struct Param {
        std::string name;
        double lo, hi;
    };
    std::string name;
    std::vector<Param> params;
    std::function<RadialProfile(const std::vector<double>&)> make;

    static ProfileFamily named(const std::string& name, int n) {
        ProfileFamily f;
        f.name = name;
        if (name == "trunc") {
            f.params = {{"M", 0.25, 8.0}};
            f.make = [n](const std::vector<double>& x) { return truncated_log(x[0], n); };
        } else if (name == "power") {
            f.params = {{"alpha", 0.3, 1.0}};
            f.make = [n](const std::vector<double>& x) { return power_profile(x[0], n); };
        } else if (name == "expo") {
            f.params = {{"a", 0.25, 8.0}};
            f.make = [n](const std::vector<double>& x) { return exp_profile(x[0], n); };
        } else {
            throw std::invalid_argument("ProfileFamily: unknown family '" + name + "'");
        }
        return f;
    }
};

/// Outcome of an empirical search for the measure-halving ratio.  The best
/// ratio found is a LOWER bound for the supremal ratio over the whole class
/// (a finite search certifies nothing more) and is never reported as the
/// supremum itself.
struct KappaEstimate {
    json measure;
    json weight;
    std::string family;
    double best_ratio = 0.0;
    std::vector<double> best_params;
    std::vector<std::pair<double, double>> trace;  // (first parameter, ratio)
    int trace_length = 0;
    bool unreliable = false;
    std::string note;
};

inline json to_json(const KappaEstimate& k) {
    json t = json::array();
    for (const auto& [x, r] : k.trace) t.push_back({x, json_num(r)});
    return json{{"measure", k.measure},
                {"weight", k.weight},
                {"family", k.family},
                {"best_ratio", json_num(k.best_ratio)},
                {"best_params", k.best_params},
                {"trace_length", k.trace_length},
                {"unreliable", k.unreliable},
                {"note", k.note},
                {"trace", t}};
}

/// ||phi||_{L(mu/2)} / ||phi||_{L(mu)} for one profile; NaN when the norms do
/// not determine a ratio (zero or infinite).
inline double kappa_ratio(const RadialMeasure& mu, const RadialProfile& phi, const Weight& w,
                          const QuadratureSpec& spec = {}) {
    auto full = orlicz_norm_against(mu, phi, w, spec);
    if (!full.finite() || full.value <= 0.0) return kNaN;
    auto half = orlicz_norm_against(mu.scaled(0.5), phi, w, spec);
    if (!half.finite()) return kNaN;
    return half.value / full.value;
}

/// Deterministic coordinate search with golden-section refinement, maximizing
/// the halving ratio over the family box within `budget` evaluations.
inline KappaEstimate kappa_lower_bound(const RadialMeasure& mu, const Weight& w,
                                       const ProfileFamily& family, int budget,
                                       const QuadratureSpec& spec = {}, int seed_order = 0) {
    if (budget < 1) throw std::invalid_argument("kappa_lower_bound: budget must be >= 1");
    KappaEstimate out;
    out.measure = measure_to_json(mu);
    out.weight = weight_to_json(w);
    out.family = family.name;

    int evals = 0;
    int invalid = 0;
    auto ratio_at = [&](const std::vector<double>& x) {
        ++evals;
        const double r = kappa_ratio(mu, family.make(x), w, spec);
        if (std::isnan(r))
            ++invalid;
        else
            out.trace.emplace_back(x[0], r);
        return r;
    };

    const std::size_t dims = family.params.size();
    std::vector<double> x(dims);
    for (std::size_t d = 0; d < dims; ++d)
        x[d] = 0.5 * (family.params[d].lo + family.params[d].hi);

    double best = -kInf;
    std::vector<double> best_x = x;
    auto consider = [&](const std::vector<double>& pt, double r) {
        if (!std::isnan(r) && r > best) {
            best = r;
            best_x = pt;
        }
    };

    // coarse sweep per coordinate, then golden refinement, round-robin
    for (int round = 0; round < 8 && evals < budget; ++round) {
        const double before = best;
        for (std::size_t dd = 0; dd < dims && evals < budget; ++dd) {
            const std::size_t d = (dd + static_cast<std::size_t>(seed_order)) % dims;
            const auto& P = family.params[d];
            if (round == 0) {
                for (int i = 0; i < 9 && evals < budget; ++i) {
                    auto pt = x;
                    pt[d] = P.lo + (P.hi - P.lo) * i / 8.0;
                    consider(pt, ratio_at(pt));
                }
                x = best_x;
            }
            const int iters = std::max(4, std::min(40, budget - evals));
            auto line = [&](double v) {
                auto pt = best_x;
                pt[d] = v;
                const double r = ratio_at(pt);
                consider(pt, r);
                return std::isnan(r) ? -kInf : r;
            };
            const double span = (P.hi - P.lo) / 8.0;
            const double lo = std::max(P.lo, best_x[d] - span);
            const double hi = std::min(P.hi, best_x[d] + span);
            golden_section_max(line, lo, hi, iters, 1e-11);
        }
        if (best - before < 1e-12 && round > 0) break;
    }

    out.trace_length = static_cast<int>(out.trace.size());
    if (!(best > -kInf)) {
        out.unreliable = true;
        out.note = "not-in-Orlicz-space: every sampled family member has an unusable norm";
        return out;
    }
    out.best_ratio = best;
    out.best_params = best_x;
    if (invalid > 0)
        out.note = std::to_string(invalid) + " family points had zero/infinite norms and were skipped";
    return out;
}

/// Minimal-slope upper support line through the (E, ||.||) sample cloud:
/// the rightmost edge of the upper convex hull, which dominates every sample
/// by construction.
struct CoercivityFit {
    double slope = 0.0;
    double intercept = 0.0;
    int sample_count = 0;
    double residual = 0.0;  // largest slack a x + C - y over the samples
    int violations = 0;     // re-verified: must be 0
    bool valid = true;
    double witness_param = kNaN;  // parameter with an infinite norm, if any
    std::string note;
    std::vector<std::array<double, 3>> samples;  // (param, E, norm)
};

inline json to_json(const CoercivityFit& f) {
    json s = json::array();
    for (const auto& row : f.samples)
        s.push_back({row[0], json_num(row[1]), json_num(row[2])});
    return json{{"slope", json_num(f.slope)},
                {"intercept", json_num(f.intercept)},
                {"sample_count", f.sample_count},
                {"residual", json_num(f.residual)},
                {"violations", f.violations},
                {"valid", f.valid},
                {"witness_param", json_num(f.witness_param)},
                {"note", f.note},
                {"samples", s}};
}

namespace detail {

inline double cross(const std::array<double, 2>& o, const std::array<double, 2>& a,
                    const std::array<double, 2>& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

/// Upper convex hull of points sorted by x (left to right).
inline std::vector<std::array<double, 2>> upper_hull(std::vector<std::array<double, 2>> pts) {
    std::sort(pts.begin(), pts.end());
    std::vector<std::array<double, 2>> hull;
    for (const auto& p : pts) {
        while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) >= 0.0)
            hull.pop_back();
        hull.push_back(p);
    }
    return hull;
}

}  // namespace detail

inline CoercivityFit coercivity_fit(const RadialMeasure& mu, const Weight& w,
                                    const ProfileFamily& family, int samples,
                                    const QuadratureSpec& spec = {}) {
    if (samples < 1) throw std::invalid_argument("coercivity_fit: need at least one sample");
    CoercivityFit out;
    const auto& P = family.params.front();
    std::vector<double> mid(family.params.size());
    for (std::size_t d = 0; d < family.params.size(); ++d)
        mid[d] = 0.5 * (family.params[d].lo + family.params[d].hi);

    std::vector<std::array<double, 2>> cloud;
    for (int i = 0; i < samples; ++i) {
        auto x = mid;
        x[0] = samples == 1 ? P.lo : P.lo + (P.hi - P.lo) * i / double(samples - 1);
        auto phi = family.make(x);
        auto E = energy(phi, w, spec);
        if (!E.finite()) {
            out.note += "sample with infinite energy skipped (param " + std::to_string(x[0]) + "); ";
            continue;
        }
        auto N = orlicz_norm_against(mu, phi, w, spec);
        out.samples.push_back({x[0], E.value, N.value});
        if (!N.finite()) {
            out.valid = false;
            out.witness_param = x[0];
            out.note += "integrability failure: ||phi|| infinite at param " + std::to_string(x[0]);
            return out;
        }
        cloud.push_back({E.value, N.value});
    }
    out.sample_count = static_cast<int>(cloud.size());
    if (cloud.empty()) {
        out.valid = false;
        out.note += "no usable samples";
        return out;
    }

    auto hull = detail::upper_hull(cloud);
    if (hull.size() == 1 || hull.front()[0] == hull.back()[0]) {
        out.slope = 0.0;
        out.intercept = hull.back()[1];
        for (const auto& p : cloud) out.intercept = std::max(out.intercept, p[1]);
    } else {
        const auto& a = hull[hull.size() - 2];
        const auto& b = hull.back();
        out.slope = (b[1] - a[1]) / (b[0] - a[0]);
        out.intercept = b[1] - out.slope * b[0];
    }
    for (const auto& p : cloud) {
        const double slack = out.slope * p[0] + out.intercept - p[1];
        out.residual = std::max(out.residual, slack);
        if (slack < -1e-9 * std::max(1.0, std::abs(p[1]))) ++out.violations;
    }
    return out;
}

/// ||phi||_{L(MA(psi))} <= max(a E(phi), 2^{1 + 1/n} E(psi) a / (a - 1)).
inline CheckReport quantitative_bound_check(const RadialProfile& gpsi, const RadialProfile& gphi,
                                            const Weight& w, double a,
                                            const QuadratureSpec& spec = {}) {
    if (!(a > 1.0)) throw std::invalid_argument("quantitative_bound_check: a must be > 1");
    json in{{"check", "quantitative-bound"}, {"psi", profile_to_json(gpsi)},
            {"phi", profile_to_json(gphi)}, {"weight", detail::weight_inputs(w)},
            {"a", a}, {"n", gpsi.dim()}};
    const std::string name = "quantitative-bound/" + gpsi.kind() + "/" + gphi.kind() + "/" +
                             w.name() + "/n=" + std::to_string(gpsi.dim()) + "/a=" + std::to_string(a);
    const int n = gpsi.dim();
    auto Ephi = energy(gphi, w, spec);
    auto Epsi = energy(gpsi, w, spec);
    if (!Ephi.finite() || !Epsi.finite())
        return skipped_report(name, in, "vacuous: an energy is infinite");
    auto lhs = orlicz_norm_against(ma_measure(gpsi), gphi, w, spec);
    const double rhs = std::max(a * Ephi.value,
                                std::pow(2.0, 1.0 + 1.0 / n) * Epsi.value * a / (a - 1.0));
    std::ostringstream diag;
    diag.precision(12);
    diag << "E(phi)=" << Ephi.value << " E(psi)=" << Epsi.value;
    return make_report(name, in, lhs.value, rhs, diag.str());
}

/// Range exploration for one candidate Monge-Ampere measure MA(psi):
/// bounded psi have finite energy for every sampled weight; unbounded psi are
/// expelled from the energy class of their own witness weight, demonstrated
/// by partial layer-cake integrals blowing past 1e6.
struct BedfordReport {
    bool bounded = false;
    struct WeightEnergy {
        std::string weight;
        double value = 0.0;
        bool finite = false;
    };
    std::vector<WeightEnergy> energies;
    struct Divergence {
        double lambda = 0.0;
        double partial = 0.0;   // lower Riemann sum when it crossed the threshold
        double cutoff = 0.0;    // t where summation stopped
        int blocks = 0;         // unit blocks consumed
        bool exceeded = false;  // partial > threshold
    };
    double threshold = 1e6;
    std::vector<Divergence> divergences;
    std::string conclusion;
};

inline json to_json(const BedfordReport& r) {
    json es = json::array();
    for (const auto& e : r.energies)
        es.push_back({{"weight", e.weight}, {"value", json_num(e.value)}, {"finite", e.finite}});
    json ds = json::array();
    for (const auto& d : r.divergences)
        ds.push_back({{"lambda", d.lambda}, {"partial", json_num(d.partial)},
                      {"cutoff", d.cutoff}, {"blocks", d.blocks}, {"exceeded", d.exceeded}});
    return json{{"bounded", r.bounded}, {"energies", es}, {"threshold", r.threshold},
                {"divergences", ds}, {"conclusion", r.conclusion}};
}

/// Lower Riemann sum of (1/lambda) h'(t/lambda) eps(t) over [0, cutoff] in
/// fine sub-steps, stopping as soon as the threshold is crossed.  Each
/// sub-step contributes its endpoint/midpoint minimum, a valid lower bound on
/// the block integral for the per-block monotone integrands at hand.
inline BedfordReport::Divergence witness_partial_sum(const DistributionFunction& eps,
                                                     const Weight& w, double lambda,
                                                     double threshold, int max_blocks = 64) {
    BedfordReport::Divergence d;
    d.lambda = lambda;
    const int steps = 16;
    for (int j = 0; j < max_blocks && !d.exceeded; ++j) {
        for (int i = 0; i < steps; ++i) {
            const double t0 = j + i / double(steps);
            const double t1 = j + (i + 1) / double(steps);
            const double tm = 0.5 * (t0 + t1);
            double lg = std::min({w.log_hprime(t0 / lambda) + eps.log_value(t0),
                                  w.log_hprime(tm / lambda) + eps.log_value(tm),
                                  w.log_hprime(t1 / lambda) + eps.log_value(t1)}) -
                        std::log(lambda);
            const double piece = lg > 709.0 ? kInf : std::exp(lg) * (t1 - t0);
            d.partial += piece;
            d.cutoff = t1;
            if (d.partial > threshold) {
                d.exceeded = true;
                break;
            }
        }
        d.blocks = j + 1;
    }
    return d;
}

inline BedfordReport bedford_pipeline(const RadialProfile& gpsi, const QuadratureSpec& spec = {}) {
    BedfordReport out;
    out.bounded = gpsi.bounded();
    if (out.bounded) {
        const std::pair<std::string, Weight> ws[] = {{"poly:p=1", polynomial_weight(1.0)},
                                                     {"poly:p=2", polynomial_weight(2.0)},
                                                     {"exp", exponential_weight()},
                                                     {"iterexp:k=2", iterated_exp_weight(2)}};
        bool all_finite = true;
        for (const auto& [name, w] : ws) {
            auto E = energy(gpsi, w, spec);
            out.energies.push_back({name, E.value, E.finite()});
            all_finite = all_finite && E.finite();
        }
        out.conclusion = all_finite
                             ? "bounded: finite energy for every sampled weight"
                             : "bounded profile with a non-finite sampled energy (unexpected)";
        return out;
    }

    auto eps = ma_distribution(gpsi);
    auto w = witness_weight(eps);
    for (double lambda : {1.0, 2.0, 4.0})
        out.divergences.push_back(witness_partial_sum(eps, w, lambda, out.threshold));
    bool all = true;
    for (const auto& d : out.divergences) all = all && d.exceeded;
    out.conclusion = all ? "unbounded: not in the energy class of its witness weight "
                           "(partial layer-cake integrals exceed the threshold at every sampled lambda)"
                         : "unbounded, but the partial sums failed to cross the threshold "
                           "within the block budget";
    return out;
}

}  // namespace pshlab
