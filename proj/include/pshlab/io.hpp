#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pshlab/radial.hpp"

namespace pshlab {

using json = nlohmann::json;

/// JSON has no infinities: encode them as strings, keep finite doubles as
/// numbers (nlohmann emits the shortest representation that round-trips).
inline json json_num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

inline double num_from(const json& j) {
    if (j.is_number()) return j.get<double>();
    const std::string s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    if (s == "nan") return kNaN;
    throw std::invalid_argument("not a number: " + s);
}

// -- weights -----------------------------------------------------------------

inline json df_to_json(const DistributionFunction& F);
inline DistributionFunction df_from_json(const json& j);

inline json weight_to_json(const Weight& w) {
    json j;
    switch (w.kind()) {
        case Weight::Kind::polynomial:
            j["kind"] = "poly";
            j["parameters"] = {{"p", w.params().at("p")}};
            return j;
        case Weight::Kind::exponential:
            j["kind"] = "exp";
            j["parameters"] = json::object();
            return j;
        case Weight::Kind::iterated_exponential:
            j["kind"] = "iterexp";
            j["parameters"] = {{"k", w.params().at("k")}};
            return j;
        case Weight::Kind::piecewise: {
            j["kind"] = "piecewise";
            j["parameters"] = json::object();
            j["breakpoints"] = w.table().breakpoints;
            j["derivative-values"] = w.table().values;
            return j;
        }
        case Weight::Kind::witness:
            j["kind"] = "witness";
            j["parameters"] = json::object();
            j["eps"] = df_to_json(w.witness_eps());
            return j;
        case Weight::Kind::tilde:
            j["kind"] = "tilde";
            j["parameters"] = {{"n", w.params().at("n")}};
            j["base"] = weight_to_json(w.tilde_base());
            return j;
        case Weight::Kind::custom:
            throw std::logic_error("weight_to_json: custom generator weights are not serializable");
    }
    throw std::logic_error("weight_to_json: unknown kind");
}

inline Weight weight_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "poly") return polynomial_weight(j.at("parameters").at("p").get<double>());
    if (kind == "exp") return exponential_weight();
    if (kind == "iterexp")
        return iterated_exp_weight(static_cast<int>(j.at("parameters").at("k").get<double>()));
    if (kind == "piecewise") {
        PiecewiseDerivative t;
        t.breakpoints = j.at("breakpoints").get<std::vector<double>>();
        t.values = j.at("derivative-values").get<std::vector<double>>();
        return piecewise_weight(std::move(t));
    }
    if (kind == "witness") return witness_weight(df_from_json(j.at("eps")));
    if (kind == "tilde")
        return tilde(weight_from_json(j.at("base")),
                     static_cast<int>(j.at("parameters").at("n").get<double>()));
    throw std::invalid_argument("weight_from_json: unknown kind '" + kind + "'");
}

// -- distribution functions ----------------------------------------------------

inline json df_to_json(const DistributionFunction& F) {
    json j;
    std::vector<double> grid;
    if (F.is_zero()) {
        j["samples"] = json::array();
    } else if (std::isfinite(F.t_max())) {
        const double T = F.t_max();
        for (int i = 1; i <= 128; ++i) grid.push_back(T * i / 128.0);
    } else {
        for (int i = 0; i <= 120; ++i) grid.push_back(std::pow(10.0, -6.0 + 9.0 * i / 120.0));
    }
    for (const auto& jp : F.jumps()) grid.push_back(jp.t);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    json samples = json::array();
    for (double t : grid) {
        bool jumped = false;
        for (const auto& jp : F.jumps()) {
            if (jp.t == t) {
                samples.push_back({t, json_num(jp.left)});
                samples.push_back({t, json_num(jp.right)});
                jumped = true;
                break;
            }
        }
        if (!jumped) samples.push_back({t, json_num(F(t))});
    }
    j["samples"] = samples;

    json jumps = json::array();
    for (const auto& jp : F.jumps())
        jumps.push_back({{"t", jp.t}, {"left", json_num(jp.left)}, {"right", json_num(jp.right)}});
    j["jumps"] = jumps;

    const char* tails[] = {"compact", "exponential", "power", "generic"};
    j["tail"] = {{"kind", tails[static_cast<int>(F.tail_kind())]}, {"rate", F.tail_rate()}};
    return j;
}

inline DistributionFunction df_from_json(const json& j) {
    std::vector<std::pair<double, double>> samples;
    for (const auto& row : j.at("samples"))
        samples.emplace_back(num_from(row.at(0)), num_from(row.at(1)));
    std::vector<DistributionFunction::Jump> jumps;
    if (j.contains("jumps"))
        for (const auto& row : j.at("jumps"))
            jumps.push_back({row.at("t").get<double>(), num_from(row.at("left")), num_from(row.at("right"))});
    DistributionFunction::Tail tail = DistributionFunction::Tail::compact;
    double rate = 0.0;
    if (j.contains("tail")) {
        const std::string k = j.at("tail").at("kind").get<std::string>();
        if (k == "exponential") tail = DistributionFunction::Tail::exponential;
        else if (k == "power") tail = DistributionFunction::Tail::power;
        else if (k == "generic") tail = DistributionFunction::Tail::generic;
        rate = j.at("tail").at("rate").get<double>();
    }
    if (samples.empty()) return DistributionFunction::zero();
    return DistributionFunction::from_samples(std::move(samples), std::move(jumps), tail, rate);
}

// -- profiles -------------------------------------------------------------------

inline json profile_to_json(const RadialProfile& p) {
    json j;
    j["kind"] = p.kind();
    json params = json::object();
    for (const auto& [k, v] : p.params()) params[k] = json_num(v);
    j["params"] = params;
    j["n"] = p.dim();
    if (!p.breakpoints().empty()) j["breakpoints"] = p.breakpoints();
    if (!p.children().empty()) {
        json kids = json::array();
        for (const auto& c : p.children()) kids.push_back(profile_to_json(c));
        j["children"] = kids;
    }
    return j;
}

inline RadialProfile profile_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    const int n = j.at("n").get<int>();
    auto param = [&](const char* k) { return j.at("params").at(k).get<double>(); };
    auto child = [&](std::size_t i) { return profile_from_json(j.at("children").at(i)); };

    if (kind == "log") return log_profile(n);
    if (kind == "zero") return zero_profile(n);
    if (kind == "trunc") return truncated_log(param("M"), n);
    if (kind == "iterlog") return iterated_log_profile(static_cast<int>(param("k")), n);
    if (kind == "power") return power_profile(param("alpha"), n);
    if (kind == "expo") return exp_profile(param("a"), n);
    if (kind == "truncate") return truncate(child(0), param("M"));
    if (kind == "exhaustion") return exhaustion(child(0), param("j"));
    if (kind == "scale") return scale_profile(child(0), param("alpha"));
    if (kind == "subext") return subextension(child(0), param("logR"));
    if (kind == "superpose") {
        std::vector<std::pair<double, RadialProfile>> terms;
        const auto& kids = j.at("children");
        for (std::size_t i = 0; i < kids.size(); ++i)
            terms.emplace_back(param(("c" + std::to_string(i)).c_str()), child(i));
        return superpose(terms);
    }
    throw std::invalid_argument("profile_from_json: kind '" + kind + "' is not reconstructible");
}

// -- measures ---------------------------------------------------------------------

inline json measure_to_json(const RadialMeasure& m) {
    json j;
    j["kind"] = m.kind();
    json params = json::object();
    for (const auto& [k, v] : m.params()) params[k] = json_num(v);
    j["params"] = params;
    if (m.factor() != 1.0) j["factor"] = m.factor();
    return j;
}

// -- the spec mini-language: kind:key=value,... ------------------------------------

namespace detail {

inline std::map<std::string, double> parse_kv(const std::string& body) {
    std::map<std::string, double> kv;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("spec parse: expected key=value in '" + item + "'");
        kv[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    }
    return kv;
}

inline std::pair<std::string, std::string> split_kind(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) return {spec, ""};
    return {spec.substr(0, colon), spec.substr(colon + 1)};
}

}  // namespace detail

inline Weight parse_weight_spec(const std::string& spec) {
    auto [kind, body] = detail::split_kind(spec);
    auto kv = detail::parse_kv(body);
    if (kind == "poly") return polynomial_weight(kv.at("p"));
    if (kind == "exp") return exponential_weight();
    if (kind == "iterexp") return iterated_exp_weight(static_cast<int>(kv.at("k")));
    throw std::invalid_argument("unknown weight spec '" + spec + "'");
}

inline RadialProfile parse_profile_spec(const std::string& spec, int n) {
    auto [kind, body] = detail::split_kind(spec);
    auto kv = detail::parse_kv(body);
    if (kind == "log") return log_profile(n);
    if (kind == "zero") return zero_profile(n);
    if (kind == "trunc") return truncated_log(kv.at("M"), n);
    if (kind == "iterlog") return iterated_log_profile(static_cast<int>(kv.at("k")), n);
    if (kind == "power") return power_profile(kv.at("alpha"), n);
    if (kind == "expo") return exp_profile(kv.at("a"), n);
    throw std::invalid_argument("unknown profile spec '" + spec + "'");
}

inline RadialMeasure measure_from_csv(std::istream& in) {
    std::vector<std::pair<double, double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ls(line);
        std::string a, b;
        if (!std::getline(ls, a, ',') || !std::getline(ls, b)) continue;
        try {
            rows.emplace_back(std::stod(a), std::stod(b));
        } catch (const std::exception&) {
            continue;  // header row
        }
    }
    return measure_from_table(std::move(rows));
}

inline RadialMeasure parse_measure_spec(const std::string& spec, int n) {
    auto [kind, body] = detail::split_kind(spec);
    if (kind == "ma") return ma_measure(parse_profile_spec(body, n));
    if (kind == "csv") {
        std::ifstream in(body);
        if (!in) throw std::invalid_argument("cannot open measure file '" + body + "'");
        return measure_from_csv(in);
    }
    auto kv = detail::parse_kv(body);
    if (kind == "atom") return atom_measure(kv.at("s"), kv.at("mass"));
    if (kind == "lebesgue")
        return lebesgue_measure(n, kv.count("scale") ? kv.at("scale") : 1.0);
    throw std::invalid_argument("unknown measure spec '" + spec + "'");
}

/// CSV plot data: columns x, y, series.
inline void write_csv_trace(std::ostream& out,
                            const std::vector<std::tuple<double, double, std::string>>& rows) {
    out << "x,y,series\n";
    for (const auto& [x, y, s] : rows) {
        out.precision(17);
        out << x << ',' << y << ',' << s << '\n';
    }
}

}  // namespace pshlab
