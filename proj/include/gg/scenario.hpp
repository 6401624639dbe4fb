#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gg/liegeom.hpp"

namespace gg {

/// Plain-text scenario file, line-oriented sections:
///   [meta]     name = ...
///   [algebra]  salamon = 0,0,0,0,0,12
///   [metric]   g = identity | diag 1 1 1 1 1 1 | rows 1 0 ...; ...
///   [flux]     H = e345 ; alpha = 0 ; phi0 = 0 (or cphi = p/q)
///   [spinors]  psiL = auto-pure | [ (1,0), (0,0), ... ] ; psiR likewise
///   [rr]       F0 = <form literal> ; F1 = <form literal>
///   [expect]   classify = W3 ; iib = true ; iia = false   (optional)
struct ScenarioText {
    std::string name;
    std::string salamon;
    std::string metric = "identity";
    std::string H = "0", alpha = "0", phi0 = "0", cphi;
    std::string psiL = "auto-pure", psiR = "auto-pure";
    std::string F0, F1;
    std::map<std::string, std::string> expect;
};

namespace scenario_detail {

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace scenario_detail

inline ScenarioText parse_scenario(const std::string& text) {
    using scenario_detail::trim;
    ScenarioText sc;
    std::istringstream in(text);
    std::string line, section;
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[') {
            std::size_t e = t.find(']');
            if (e == std::string::npos) throw std::invalid_argument("scenario: bad section header");
            section = trim(t.substr(1, e - 1));
            t = trim(t.substr(e + 1));
            if (t.empty()) continue;
        }
        std::size_t eq = t.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("scenario: expected key = value");
        std::string key = trim(t.substr(0, eq));
        std::string val = trim(t.substr(eq + 1));
        if (section == "meta" && key == "name") sc.name = val;
        else if (section == "algebra" && key == "salamon") sc.salamon = val;
        else if (section == "metric" && key == "g") sc.metric = val;
        else if (section == "flux" && key == "H") sc.H = val;
        else if (section == "flux" && key == "alpha") sc.alpha = val;
        else if (section == "flux" && key == "phi0") sc.phi0 = val;
        else if (section == "flux" && key == "cphi") sc.cphi = val;
        else if (section == "spinors" && key == "psiL") sc.psiL = val;
        else if (section == "spinors" && key == "psiR") sc.psiR = val;
        else if (section == "rr" && key == "F0") sc.F0 = val;
        else if (section == "rr" && key == "F1") sc.F1 = val;
        else if (section == "expect") sc.expect[key] = val;
        else throw std::invalid_argument("scenario: unknown key '" + key + "' in [" + section + "]");
    }
    if (sc.salamon.empty()) throw std::invalid_argument("scenario: missing [algebra] salamon");
    return sc;
}

inline std::string emit_scenario(const ScenarioText& sc) {
    std::ostringstream out;
    if (!sc.name.empty()) out << "[meta]\nname = " << sc.name << "\n";
    out << "[algebra]\nsalamon = " << sc.salamon << "\n";
    out << "[metric]\ng = " << sc.metric << "\n";
    out << "[flux]\nH = " << sc.H << "\nalpha = " << sc.alpha << "\n";
    if (!sc.cphi.empty())
        out << "cphi = " << sc.cphi << "\n";
    else
        out << "phi0 = " << sc.phi0 << "\n";
    out << "[spinors]\npsiL = " << sc.psiL << "\npsiR = " << sc.psiR << "\n";
    if (!sc.F0.empty() || !sc.F1.empty()) {
        out << "[rr]\n";
        if (!sc.F0.empty()) out << "F0 = " << sc.F0 << "\n";
        if (!sc.F1.empty()) out << "F1 = " << sc.F1 << "\n";
    }
    if (!sc.expect.empty()) {
        out << "[expect]\n";
        for (const auto& [k, v] : sc.expect) out << k << " = " << v << "\n";
    }
    return out.str();
}

inline ScenarioText load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("scenario: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

/// Scenario prepared for the engine: model and all data in the orthonormal coframe of the
/// given metric (the engine then runs with g = Id; the original metric is kept for reports).
template <class S>
struct PreparedScenario {
    ScenarioText text;
    LieAlgebraModel<S> model;  // orthonormal frame
    MetricData<S> metric_original;
    ModelStructure<S> structure;
    std::optional<MultiForm<S>> F0, F1;
};

namespace scenario_detail {

template <class S>
MetricData<S> parse_metric(const std::string& text, int n) {
    std::istringstream in(text);
    std::string head;
    in >> head;
    if (head == "identity") return MetricData<S>::identity(n);
    if (head == "diag") {
        Matrix<S> g(n, n);
        for (int i = 0; i < n; ++i) {
            std::string tok;
            if (!(in >> tok)) throw std::invalid_argument("metric: diag needs n entries");
            std::size_t p = 0;
            g(i, i) = literal_detail::parse_real<S>(tok, p);
        }
        return MetricData<S>(std::move(g));
    }
    if (head == "rows") {
        std::string rest;
        std::getline(in, rest);
        Matrix<S> g(n, n);
        std::istringstream rs(rest);
        std::string rowtok;
        int r = 0;
        while (std::getline(rs, rowtok, ';')) {
            std::istringstream row(rowtok);
            for (int c = 0; c < n; ++c) {
                std::string tok;
                if (!(row >> tok)) throw std::invalid_argument("metric: row too short");
                std::size_t p = 0;
                g(r, c) = literal_detail::parse_real<S>(tok, p);
            }
            ++r;
        }
        if (r != n) throw std::invalid_argument("metric: wrong number of rows");
        return MetricData<S>(std::move(g));
    }
    throw std::invalid_argument("metric: expected identity | diag ... | rows ...");
}

template <class S>
Spinor<S> parse_spinor(const std::string& text, const SpinModulePtr<S>& mod) {
    std::string t = trim(text);
    if (t == "auto-pure") return mod->auto_pure(mod);
    if (t.empty() || t.front() != '[' || t.back() != ']')
        throw std::invalid_argument("spinor: expected auto-pure or [ (a,b), ... ]");
    std::string body = t.substr(1, t.size() - 2);
    std::vector<S> coef;
    std::size_t i = 0;
    while (i < body.size()) {
        literal_detail::skip_ws(body, i);
        if (i >= body.size()) break;
        coef.push_back(literal_detail::parse_scalar<S>(body, i));
        literal_detail::skip_ws(body, i);
        if (i < body.size()) {
            if (body[i] != ',') throw std::invalid_argument("spinor: expected ','");
            ++i;
        }
    }
    if (coef.size() != mod->dim) throw std::invalid_argument("spinor: wrong coefficient count");
    return Spinor<S>(mod, std::move(coef));
}

}  // namespace scenario_detail

template <class S>
PreparedScenario<S> prepare_scenario(const ScenarioText& sc) {
    using traits = scalar_traits<S>;
    auto model0 = parse_model<S>(sc.salamon);
    const int n = model0.n;
    auto g = scenario_detail::parse_metric<S>(sc.metric, n);
    auto model = to_orthonormal_frame(model0, g);
    auto H = g.to_frame(parse_form<S>(sc.H, n));
    auto alpha = g.to_frame(parse_form<S>(sc.alpha, n));
    S c_phi = traits::one();
    if (!sc.cphi.empty()) {
        std::size_t p = 0;
        c_phi = literal_detail::parse_real<S>(sc.cphi, p);
    } else {
        std::size_t p = 0;
        S phi0 = literal_detail::parse_real<S>(sc.phi0, p);
        if constexpr (traits::exact) {
            if (!traits::is_zero(phi0))
                throw std::invalid_argument(
                    "scenario: nonzero phi0 needs float mode or an explicit rational cphi");
        } else {
            c_phi = traits::make(std::exp(traits::approx_abs(phi0) *
                                          (traits::is_positive(phi0) ? 1.0 : -1.0)),
                                 0.0);
        }
    }
    auto mod = build_spin_module<S>(n);
    auto psiL = scenario_detail::parse_spinor<S>(sc.psiL, mod);
    auto psiR = scenario_detail::parse_spinor<S>(sc.psiR, mod);
    FluxData<S> flux(model, H, alpha, c_phi);
    auto su = build_su_m(GenMetric<S>(MetricData<S>::identity(n), MultiForm<S>(n)), alpha, c_phi,
                         psiL, psiR);
    PreparedScenario<S> out{sc, model, g,
                            ModelStructure<S>{model, std::move(flux), std::move(su)},
                            std::nullopt, std::nullopt};
    if (!sc.F0.empty()) out.F0 = g.to_frame(parse_form<S>(sc.F0, n));
    if (!sc.F1.empty()) out.F1 = g.to_frame(parse_form<S>(sc.F1, n));
    return out;
}

}  // namespace gg
