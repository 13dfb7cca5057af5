#pragma once

#include <algorithm>
#include <cmath>
#include <future>
#include <string>
#include <vector>

#include "pshlab/io.hpp"
#include "pshlab/radial.hpp"

namespace pshlab {

/// Outcome of one inequality verification.  margin = rhs - lhs; a check
/// passes when the margin clears -1e-6 * max(1, |rhs|).  A check whose
/// hypothesis fails (infinite energy, violated ordering) is marked skipped,
/// never passed.
struct CheckReport {
    std::string name;
    json inputs;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    std::string status;  // "pass" | "fail" | "skipped"
    bool passed = false;
    std::string diagnostics;
};

inline double check_tolerance(double rhs) {
    return 1e-6 * std::max(1.0, std::isfinite(rhs) ? std::abs(rhs) : 1.0);
}

inline CheckReport make_report(std::string name, json inputs, double lhs, double rhs,
                               std::string diagnostics = "") {
    CheckReport r;
    r.name = std::move(name);
    r.inputs = std::move(inputs);
    r.lhs = lhs;
    r.rhs = rhs;
    r.diagnostics = std::move(diagnostics);
    if (std::isinf(lhs) && std::isinf(rhs) && lhs > 0 && rhs > 0) {
        r.margin = kNaN;
        r.status = "skipped";
        r.diagnostics += (r.diagnostics.empty() ? "" : "; ") + std::string("vacuous: both sides infinite");
        return r;
    }
    r.margin = rhs - lhs;
    r.passed = r.margin >= -check_tolerance(rhs);
    r.status = r.passed ? "pass" : "fail";
    return r;
}

inline CheckReport skipped_report(std::string name, json inputs, std::string why) {
    CheckReport r;
    r.name = std::move(name);
    r.inputs = std::move(inputs);
    r.lhs = r.rhs = r.margin = kNaN;
    r.status = "skipped";
    r.diagnostics = std::move(why);
    return r;
}

inline json to_json(const CheckReport& r) {
    return json{{"name", r.name},       {"inputs", r.inputs},
                {"lhs", json_num(r.lhs)}, {"rhs", json_num(r.rhs)},
                {"margin", json_num(r.margin)}, {"status", r.status},
                {"pass", r.passed},     {"diagnostics", r.diagnostics}};
}

inline std::string csv_header_check() { return "name,lhs,rhs,margin,pass"; }

inline std::string csv_row(const CheckReport& r) {
    std::ostringstream os;
    os.precision(17);
    os << r.name << ',' << r.lhs << ',' << r.rhs << ',' << r.margin << ','
       << (r.status == "pass" ? "true" : r.status == "fail" ? "false" : "skipped");
    return os.str();
}

/// 512 log-spaced points on [-40, 0) plus every breakpoint of the profiles.
inline std::vector<double> comparison_grid(const std::vector<RadialProfile>& ps) {
    std::vector<double> grid;
    for (int i = 0; i < 512; ++i)
        grid.push_back(-std::pow(10.0, -9.0 + (std::log10(40.0) + 9.0) * i / 511.0));
    for (const auto& p : ps)
        for (double b : p.breakpoints())
            if (b < 0.0) grid.push_back(b);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

namespace detail {

inline json weight_inputs(const Weight& w) {
    json j;
    j["kind"] = w.name();
    for (const auto& [k, v] : w.params()) j[k] = v;
    return j;
}

inline std::string norm_note(const NormResult& r) {
    return r.note.empty() ? "" : r.note;
}

}  // namespace detail

// -- individual checks ---------------------------------------------------------

/// E(alpha phi) <= max(alpha, alpha^{n+1}) E(phi).
inline CheckReport check_scaling(const RadialProfile& g, const Weight& w, double alpha,
                                 const QuadratureSpec& spec = {}) {
    if (!(alpha > 0.0)) throw std::invalid_argument("check_scaling: alpha must be positive");
    json in{{"check", "scaling"}, {"profile", profile_to_json(g)},
            {"weight", detail::weight_inputs(w)}, {"alpha", alpha}, {"n", g.dim()}};
    const std::string name = "scaling/" + g.kind() + "/" + w.name() + "/n=" +
                             std::to_string(g.dim()) + "/alpha=" + std::to_string(alpha);
    auto E = energy(g, w, spec);
    if (!E.finite()) return skipped_report(name, in, "vacuous: E(phi) infinite; " + detail::norm_note(E));
    auto Ea = energy(scale_profile(g, alpha), w, spec);
    const double bound = std::max(alpha, std::pow(alpha, g.dim() + 1.0)) * E.value;
    return make_report(name, in, Ea.value, bound, detail::norm_note(Ea));
}

/// phi <= psi implies E(psi) <= 2^{n+1} E(phi).
inline CheckReport check_fundamental(const RadialProfile& g_low, const RadialProfile& g_high,
                                     const Weight& w, const QuadratureSpec& spec = {}) {
    for (double s : comparison_grid({g_low, g_high}))
        if (g_low.g(s) > g_high.g(s) + 1e-12)
            throw std::invalid_argument("check_fundamental: profiles are not ordered");
    json in{{"check", "fundamental"}, {"low", profile_to_json(g_low)},
            {"high", profile_to_json(g_high)}, {"weight", detail::weight_inputs(w)},
            {"n", g_low.dim()}};
    const std::string name = "fundamental/" + g_low.kind() + "<=" + g_high.kind() + "/" + w.name() +
                             "/n=" + std::to_string(g_low.dim());
    auto El = energy(g_low, w, spec);
    if (!El.finite()) return skipped_report(name, in, "vacuous: E(phi) infinite; " + detail::norm_note(El));
    auto Eh = energy(g_high, w, spec);
    const double bound = std::pow(2.0, g_low.dim() + 1.0) * El.value;
    return make_report(name, in, Eh.value, bound, detail::norm_note(Eh));
}

/// J <= 2 max(1, E) and E <= max(1, J^{n+1}); the report carries the binding
/// inequality, the diagnostics both.
inline CheckReport check_cap_characterization(const RadialProfile& g, const Weight& w,
                                              const QuadratureSpec& spec = {}) {
    json in{{"check", "cap-characterization"}, {"profile", profile_to_json(g)},
            {"weight", detail::weight_inputs(w)}, {"n", g.dim()}};
    const std::string name = "cap-characterization/" + g.kind() + "/" + w.name() + "/n=" +
                             std::to_string(g.dim());
    auto E = energy(g, w, spec);
    auto J = j_energy(g, w, spec);
    if (!E.finite() && !J.finite())
        return skipped_report(name, in, "vacuous: E and J both infinite");
    const double rhs1 = 2.0 * std::max(1.0, E.value);
    const double rhs2 = std::max(1.0, std::pow(J.value, g.dim() + 1.0));
    const double m1 = rhs1 - J.value;
    const double m2 = rhs2 - E.value;
    std::ostringstream diag;
    diag.precision(12);
    diag << "E=" << E.value << " J=" << J.value << " (J<=2max(1,E): margin " << m1
         << "; E<=max(1,J^{n+1}): margin " << m2 << ")";
    if (m1 <= m2) return make_report(name, in, J.value, rhs1, diag.str());
    return make_report(name, in, E.value, rhs2, diag.str());
}

/// Forward: Cap(phi <= -s) <= 1 / h~(s / J) on an s-grid; converse: fit
/// (C0, lambda0) to the capacity profile and confirm E <= max(C0, lambda0)^{n+1}.
inline CheckReport check_cap_decay(const RadialProfile& g, const Weight& w,
                                   const QuadratureSpec& spec = {}) {
    json in{{"check", "cap-decay"}, {"profile", profile_to_json(g)},
            {"weight", detail::weight_inputs(w)}, {"n", g.dim()}};
    const std::string name = "cap-decay/" + g.kind() + "/" + w.name() + "/n=" +
                             std::to_string(g.dim());
    const int n = g.dim();
    auto J = j_energy(g, w, spec);
    if (!J.finite()) return skipped_report(name, in, "vacuous: J infinite; " + detail::norm_note(J));
    auto ht = tilde(w, n);
    auto capdf = cap_distribution(g);

    const double s_hi = std::isfinite(capdf.t_max()) ? capdf.t_max() : 64.0;
    std::vector<double> sgrid;
    for (int i = 0; i < 24; ++i)
        sgrid.push_back(s_hi * std::pow(10.0, -3.0 * (23 - i) / 23.0));

    double fwd_margin = kInf;
    double fwd_lhs = 0.0, fwd_rhs = kInf;
    for (double s : sgrid) {
        const double cap = capdf.left_value(s);
        const double hv = ht.h(s / J.value);
        const double bound = hv > 0.0 ? 1.0 / hv : kInf;
        if (bound - cap < fwd_margin) {
            fwd_margin = bound - cap;
            fwd_lhs = cap;
            fwd_rhs = bound;
        }
    }

    // converse fit: smallest C0 making the decay bound hold on the grid
    auto E = energy(g, w, spec);
    std::ostringstream diag;
    diag.precision(12);
    diag << "J=" << J.value << " forward-margin=" << fwd_margin;
    if (!E.finite()) {
        diag << "; converse skipped: E infinite";
        return make_report(name, in, fwd_lhs, fwd_rhs, diag.str());
    }
    double best = kInf;
    for (double lam0 : {std::max(1.0, J.value), 2.0 * std::max(1.0, J.value), std::max(1.0, E.value)}) {
        double C0 = 0.0, prev = -kInf;
        bool growing_tail = false;
        for (std::size_t i = 0; i < sgrid.size(); ++i) {
            const double s = sgrid[i];
            const double v = capdf.left_value(s) * (1.0 + s) * (1.0 + s) * std::pow(s, n) *
                             w.hprime(s / lam0);
            C0 = std::max(C0, v);
            if (i + 1 == sgrid.size() && v >= prev && v == C0 && !std::isfinite(capdf.t_max()))
                growing_tail = true;
            prev = v;
        }
        if (growing_tail) continue;
        best = std::min(best, std::pow(std::max(C0, lam0), n + 1.0));
    }
    if (!std::isfinite(best)) {
        diag << "; converse fit failed: capacity decays slower than every tested (C0, lambda0)";
        return make_report(name, in, fwd_lhs, fwd_rhs, diag.str());
    }
    diag << "; converse bound=" << best << " E=" << E.value;
    const double m2 = best - E.value;
    if (m2 < fwd_margin) return make_report(name, in, E.value, best, diag.str());
    return make_report(name, in, fwd_lhs, fwd_rhs, diag.str());
}

/// Volume layer-cake of H_beta(-phi / (2 max(1, E))) converges for beta < 2n,
/// and the radial identity Vol = V1 exp(-2n / Cap^{1/n}) holds pointwise.
inline CheckReport check_moser_trudinger(const RadialProfile& g, const Weight& w, double beta,
                                         const QuadratureSpec& spec = {}) {
    json in{{"check", "moser-trudinger"}, {"profile", profile_to_json(g)},
            {"weight", detail::weight_inputs(w)}, {"beta", beta}, {"n", g.dim()}};
    const std::string name = "moser-trudinger/" + g.kind() + "/" + w.name() + "/n=" +
                             std::to_string(g.dim()) + "/beta=" + std::to_string(beta);
    const int n = g.dim();
    auto E = energy(g, w, spec);
    if (!E.finite()) return skipped_report(name, in, "vacuous: E infinite; " + detail::norm_note(E));
    const double lam = 2.0 * std::max(1.0, E.value);
    auto ht = tilde(w, n);
    auto vol = vol_distribution(g);

    // integrand assembled in the log domain: the volume factor underflows
    // long before the H_beta' factor stops growing
    auto integrand = [&](double t) {
        const double u = t / lam;
        if (u <= 0.0) return 0.0;
        const double htv = ht.h(u);
        if (!(htv > 0.0)) return 0.0;
        const double lg = std::log(beta / n) + (1.0 / n - 1.0) * std::log(htv) +
                          ht.log_hprime(u) + beta * std::pow(htv, 1.0 / n) -
                          std::log(lam) + vol.log_value(t);
        return lg > 709.0 ? kInf : std::exp(lg);
    };

    std::vector<double> splits;
    for (const auto& jp : vol.jumps()) splits.push_back(jp.t);
    IntegralResult integral;
    if (std::isfinite(vol.t_max())) {
        integral = integrate_split(integrand, 0.0, vol.t_max(), splits, spec);
    } else {
        const double T0 = std::max(lam, 1.0);
        auto head = integrate_split(integrand, 0.0, T0, splits, spec);
        auto rest = integrate_semi_infinite(integrand, T0, spec,
                                            [](double, double) { return std::vector<double>{}; });
        integral.value = head.value + rest.value;
        integral.divergent = head.divergent || rest.divergent;
        integral.converged = head.converged && rest.converged;
        integral.note = rest.note.empty() ? head.note : rest.note;
    }

    // radial identity, checked pointwise on the evaluation grid
    auto capdf = cap_distribution(g);
    const double t_hi = std::isfinite(vol.t_max()) ? vol.t_max() : 32.0;
    double id_err = 0.0;
    for (int i = 1; i <= 40; ++i) {
        const double t = t_hi * i / 40.0 * (1.0 - 1e-9);
        const double lhs = vol(t);
        const double cap = capdf(t);
        const double rhs = cap > 0.0 ? std::exp(-2.0 * n / std::pow(cap, 1.0 / n)) : 0.0;
        id_err = std::max(id_err, std::abs(lhs - rhs));
    }

    std::ostringstream diag;
    diag.precision(12);
    diag << "integral=" << integral.value << " lambda=" << lam << " identity-max-err=" << id_err;
    if (integral.divergent || !integral.converged) {
        if (beta >= 2.0 * n) {
            return skipped_report(name, in,
                                  "boundary sharpness at beta >= 2n: " + integral.note +
                                      " (reported, not asserted)");
        }
        diag << "; " << integral.note;
        return make_report(name, in, kInf, spec.divergence_threshold, diag.str());
    }
    auto rep = make_report(name, in, integral.value, spec.divergence_threshold, diag.str());
    if (id_err > 1e-10) {
        rep.status = "fail";
        rep.passed = false;
        rep.diagnostics += "; radial volume identity violated";
    }
    return rep;
}

/// I(sum eps_j alpha_j f_j) <= sup_j I(f_j), with the left side evaluated on
/// the union-bound upper envelope of the superposition's capacity
/// distribution (the norm uses the tilde weight, matching J).
inline CheckReport check_choquet_convexity(const std::vector<RadialProfile>& gs,
                                           const std::vector<double>& eps,
                                           const std::vector<double>& alphas, const Weight& w,
                                           const QuadratureSpec& spec = {}) {
    if (gs.empty() || gs.size() != eps.size() || gs.size() != alphas.size())
        throw std::invalid_argument("check_choquet_convexity: size mismatch");
    double se = 0.0, sa = 0.0;
    for (double e : eps) se += e;
    for (double a : alphas) sa += a;
    if (se > 1.0 + 1e-12 || sa > 1.0 + 1e-12)
        throw std::invalid_argument("check_choquet_convexity: coefficient sums must be <= 1");

    const int n = gs.front().dim();
    json in{{"check", "choquet-convexity"}, {"weight", detail::weight_inputs(w)},
            {"n", n}, {"terms", gs.size()}, {"eps", eps}, {"alphas", alphas}};
    std::string name = "choquet-convexity/" + std::to_string(gs.size()) + "terms/";
    for (const auto& g : gs) name += g.kind() + "+";
    name.back() = '/';
    name += w.name() + "/n=" + std::to_string(n);

    auto ht = tilde(w, n);
    std::vector<DistributionFunction> caps;
    double rhs = 0.0;
    for (const auto& g : gs) {
        caps.push_back(cap_distribution(g));
        auto Jg = choquet_norm(caps.back(), ht, spec);
        rhs = std::max(rhs, Jg.value);
    }
    if (!std::isfinite(rhs))
        return make_report(name, in, 0.0, rhs, "sup of the component norms is infinite");

    auto envelope_integral = [&](double lambda) {
        double acc = 0.0;
        for (std::size_t i = 0; i < gs.size(); ++i) {
            auto r = layercake_integral(caps[i], ht, lambda / alphas[i], spec, 8.0);
            if (r.divergent) return kInf;
            acc += eps[i] * r.value;
        }
        return acc;
    };

    // smallest lambda with envelope integral <= 1
    double lo = rhs > 0.0 ? rhs / 16.0 : 1e-6, hi = std::max(rhs, 1e-6);
    int guard = 0;
    while (envelope_integral(hi) > 1.0 && ++guard < 64) hi *= 2.0;
    while (envelope_integral(lo) <= 1.0 && ++guard < 128) lo /= 2.0;
    for (int i = 0; i < 80 && hi - lo > 1e-10 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (envelope_integral(mid) <= 1.0 ? hi : lo) = mid;
    }

    // exact superposition norm, for the record
    std::vector<std::pair<double, RadialProfile>> terms;
    for (std::size_t i = 0; i < gs.size(); ++i)
        terms.emplace_back(eps[i] * alphas[i], gs[i]);
    auto exact = j_energy(superpose(terms), w, spec);

    std::ostringstream diag;
    diag.precision(12);
    diag << "envelope-norm=" << hi << " exact-superposition-norm=" << exact.value;
    return make_report(name, in, hi, rhs, diag.str());
}

/// Lower semicontinuity along a decreasing sequence: E(lim) <= min_j E(g_j).
inline CheckReport check_semicontinuity(const std::vector<RadialProfile>& seq,
                                        const RadialProfile& g, const Weight& w,
                                        const QuadratureSpec& spec = {}) {
    if (seq.empty()) throw std::invalid_argument("check_semicontinuity: empty sequence");
    auto grid = comparison_grid({g});
    for (std::size_t j = 0; j + 1 < seq.size(); ++j)
        for (double s : grid)
            if (seq[j + 1].g(s) > seq[j].g(s) + 1e-12)
                throw std::invalid_argument("check_semicontinuity: sequence is not decreasing");
    for (double s : grid)
        if (g.g(s) > seq.back().g(s) + 1e-12)
            throw std::invalid_argument("check_semicontinuity: limit exceeds the sequence");

    json in{{"check", "semicontinuity"}, {"limit", profile_to_json(g)},
            {"weight", detail::weight_inputs(w)}, {"n", g.dim()}, {"terms", seq.size()}};
    const std::string name = "semicontinuity/" + g.kind() + "/" + w.name() + "/n=" +
                             std::to_string(g.dim());

    double rhs = kInf;
    for (const auto& gj : seq) rhs = std::min(rhs, energy(gj, w, spec).value);
    auto E = energy(g, w, spec);
    return make_report(name, in, E.value, rhs, detail::norm_note(E));
}

/// psi = sum_j 4^{-j} phi_j has E(psi) <= (2 max(1, A))^{n+1} whenever each
/// E(phi_j) <= A.  Lists longer than 8 are truncated with a tail estimate.
inline CheckReport check_cone_combination(const std::vector<RadialProfile>& gs, double A,
                                          const Weight& w, const QuadratureSpec& spec = {}) {
    if (gs.empty()) throw std::invalid_argument("check_cone_combination: empty list");
    const int n = gs.front().dim();
    json in{{"check", "cone-combination"}, {"weight", detail::weight_inputs(w)},
            {"n", n}, {"A", A}, {"terms", gs.size()}};
    std::string name = "cone-combination/" + std::to_string(gs.size()) + "terms/";
    for (const auto& g : gs) name += g.kind() + "+";
    name.back() = '/';
    name += w.name() + "/n=" + std::to_string(n);

    std::string tail_note;
    std::vector<RadialProfile> used(gs.begin(), gs.begin() + std::min<std::size_t>(gs.size(), 8));
    if (gs.size() > 8) {
        double worst = 0.0;
        for (std::size_t j = 8; j < gs.size(); ++j) {
            if (!gs[j].bounded())
                return skipped_report(name, in,
                                      "truncation-tail estimate failed: unbounded term beyond j=8");
            worst = std::max(worst, -gs[j].g_min());
        }
        std::ostringstream os;
        os << "truncated at j=8; dropped tail bounded by " << std::pow(4.0, -8.0) / 3.0 * worst;
        tail_note = os.str();
    }

    for (const auto& g : used) {
        auto Ej = energy(g, w, spec);
        if (!(Ej.value <= A * (1.0 + 1e-9)))
            return skipped_report(name, in, "hypothesis failed: a term has E > A");
    }

    std::vector<std::pair<double, RadialProfile>> terms;
    for (std::size_t j = 0; j < used.size(); ++j)
        terms.emplace_back(std::pow(4.0, -double(j + 1)), used[j]);
    auto E = energy(superpose(terms), w, spec);
    const double bound = std::pow(2.0 * std::max(1.0, A), n + 1.0);
    return make_report(name, in, E.value, bound,
                       tail_note.empty() ? detail::norm_note(E) : tail_note);
}

// -- suite ------------------------------------------------------------------------

struct SuiteConfig {
    int n = 1;
    QuadratureSpec quad;
    bool parallel = true;
};

/// Assembles the family x weight cross product and runs every check.
/// Reports are aggregated deterministically, sorted by check name.
inline std::vector<CheckReport> run_suite(const SuiteConfig& cfg) {
    const int n = cfg.n;
    const auto& q = cfg.quad;

    std::vector<RadialProfile> profiles = {
        truncated_log(1.0, n), truncated_log(2.0, n), truncated_log(4.0, n),
        iterated_log_profile(1, n), power_profile(0.5, n), exp_profile(2.0, n)};
    std::vector<Weight> weights = {polynomial_weight(1.0), polynomial_weight(2.0),
                                   exponential_weight()};

    std::vector<std::function<CheckReport()>> tasks;

    for (const auto& g : profiles)
        for (const auto& w : weights)
            for (double alpha : {0.5, 1.0, 2.0})
                tasks.push_back([=] { return check_scaling(g, w, alpha, q); });

    std::vector<std::pair<RadialProfile, RadialProfile>> pairs = {
        {truncated_log(4.0, n), truncated_log(2.0, n)},
        {truncated_log(2.0, n), truncated_log(1.0, n)},
        {iterated_log_profile(1, n), truncate(iterated_log_profile(1, n), 2.0)},
        {exp_profile(2.0, n), truncated_log(0.5, n)},
        {power_profile(0.5, n), truncate(power_profile(0.5, n), 1.0)}};
    for (const auto& [lo, hi] : pairs)
        for (const auto& w : weights)
            tasks.push_back([=] { return check_fundamental(lo, hi, w, q); });

    for (const auto& g : profiles)
        for (const auto& w : weights) {
            tasks.push_back([=] { return check_cap_characterization(g, w, q); });
            tasks.push_back([=] { return check_cap_decay(g, w, q); });
            for (double frac : {0.5, 1.0, 1.9})
                tasks.push_back([=] { return check_moser_trudinger(g, w, frac * n, q); });
        }

    // choquet convexity: pairs and geometric series across the family
    {
        const auto& w0 = weights.front();
        for (std::size_t i = 0; i < profiles.size(); ++i)
            for (std::size_t j = i; j < profiles.size(); ++j) {
                std::vector<RadialProfile> gs = {profiles[i], profiles[j]};
                tasks.push_back([=] {
                    return check_choquet_convexity(gs, {0.5, 0.5}, {0.5, 0.5}, w0, q);
                });
            }
        std::vector<RadialProfile> geo;
        std::vector<double> coef;
        for (int j = 1; j <= 6; ++j) {
            geo.push_back(truncated_log(double(1 + (j % 3)), n));
            coef.push_back(std::pow(2.0, -j));
        }
        for (const auto& w : weights)
            tasks.push_back([=] { return check_choquet_convexity(geo, coef, coef, w, q); });
    }

    for (const auto& w : weights) {
        for (const auto& base : {iterated_log_profile(1, n), power_profile(0.5, n)}) {
            std::vector<RadialProfile> truncs, exhs;
            // max(g, -M) decreases to g as M grows; same for max(g, j s) in j
            for (double M : {1.0, 2.0, 4.0, 8.0, 16.0}) truncs.push_back(truncate(base, M));
            for (double j : {1.0, 2.0, 4.0, 8.0, 16.0}) exhs.push_back(exhaustion(base, j));
            tasks.push_back([=] { return check_semicontinuity(truncs, base, w, q); });
            tasks.push_back([=] { return check_semicontinuity(exhs, base, w, q); });
        }
    }

    for (const auto& w : weights) {
        std::vector<RadialProfile> same = {truncated_log(2.0, n), truncated_log(2.0, n),
                                           truncated_log(2.0, n)};
        std::vector<RadialProfile> mixed = {truncated_log(1.0, n), truncated_log(2.0, n),
                                            truncated_log(4.0, n)};
        double A = 0.0;
        for (const auto& g : mixed) A = std::max(A, energy(g, w, cfg.quad).value);
        tasks.push_back([=] { return check_cone_combination(same, std::max(1.0, A), w, q); });
        tasks.push_back([=] { return check_cone_combination(mixed, std::max(1.0, A), w, q); });
    }

    std::vector<CheckReport> reports(tasks.size());
    if (cfg.parallel) {
        std::vector<std::future<CheckReport>> futs;
        futs.reserve(tasks.size());
        for (auto& t : tasks) futs.push_back(std::async(std::launch::async | std::launch::deferred, t));
        for (std::size_t i = 0; i < futs.size(); ++i) reports[i] = futs[i].get();
    } else {
        for (std::size_t i = 0; i < tasks.size(); ++i) reports[i] = tasks[i]();
    }
    std::sort(reports.begin(), reports.end(),
              [](const CheckReport& a, const CheckReport& b) { return a.name < b.name; });
    return reports;
}

}  // namespace pshlab
