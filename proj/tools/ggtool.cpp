// ggtool: command-line surface of the generalised-geometry engine.
//
//   ggtool check-identities --n 6 --seed 1 --trials 100 [--mode exact|float]
//                           [--mutation name] [--jobs J] [--out path]
//   ggtool cohomology <scenario.scn> [--mode ...]
//   ggtool susy-check <scenario.scn> [--seed S] [--mode ...]
//   ggtool classify   <scenario.scn> [--emit path] [--mode ...]
//   ggtool no-go      <scenario.scn> [--mode ...]
//   ggtool critical   <scenario.scn> --tau <form> --gamma <form> [--mode ...]
//
// Exit status: 0 success, 1 check failures, 2 usage errors.

#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "gg/verify.hpp"

namespace {

struct Args {
    std::string subcommand;
    std::vector<std::string> positional;
    std::map<std::string, std::string> options;
};

Args parse_args(int argc, char** argv) {
    Args a;
    if (argc < 2) return a;
    a.subcommand = argv[1];
    for (int i = 2; i < argc; ++i) {
        std::string t = argv[i];
        if (t.rfind("--", 0) == 0) {
            std::string key = t.substr(2);
            if (i + 1 < argc) {
                a.options[key] = argv[++i];
            } else {
                a.options[key] = "";
            }
        } else {
            a.positional.push_back(t);
        }
    }
    return a;
}

void usage(std::ostream& os) {
    os << "usage: ggtool <subcommand> [options]\n"
          "  check-identities --n N --seed S --trials T [--mode exact|float]\n"
          "                   [--mutation none|hat-sign|tilde-sign|commut-lift|faction-scale|volume-phase]\n"
          "                   [--jobs J] [--out path]\n"
          "  cohomology <scenario> [--mode exact|float]\n"
          "  susy-check <scenario> [--seed S] [--mode exact|float]\n"
          "  classify   <scenario> [--emit path] [--mode exact|float]\n"
          "  no-go      <scenario> [--mode exact|float]\n"
          "  critical   <scenario> --tau <form> --gamma <form> [--mode exact|float]\n";
}

void write_report(const gg::Report& rep, const Args& args) {
    std::string text = rep.render();
    std::cout << text;
    auto it = args.options.find("out");
    if (it != args.options.end() && !it->second.empty()) {
        std::ofstream out(it->second, std::ios::app);
        out << text;
    }
}

long opt_long(const Args& a, const std::string& key, long fallback) {
    auto it = a.options.find(key);
    return it == a.options.end() ? fallback : std::stol(it->second);
}

std::string opt_str(const Args& a, const std::string& key, const std::string& fallback) {
    auto it = a.options.find(key);
    return it == a.options.end() ? fallback : it->second;
}

template <class S>
int cmd_check_identities(const Args& args) {
    int n = static_cast<int>(opt_long(args, "n", 6));
    auto seed = static_cast<std::uint64_t>(opt_long(args, "seed", 1));
    int trials = static_cast<int>(opt_long(args, "trials", 100));
    int jobs = static_cast<int>(opt_long(args, "jobs", 1));
    auto mut = gg::mutation_from_name(opt_str(args, "mutation", "none"));
    auto rep = gg::run_identity_suite<S>(n, seed, trials, mut, jobs);
    write_report(rep, args);
    return rep.all_pass() ? 0 : 1;
}

template <class S>
void warn_unimodular(const gg::PreparedScenario<S>& ps, gg::Report& rep) {
    if (!ps.model.unimodular)
        rep.fields.push_back(
            {"warning", "model not unimodular; the codifferential is not an exact adjoint"});
}

template <class S>
int cmd_cohomology(const Args& args) {
    auto ps = gg::prepare_scenario<S>(gg::load_scenario_file(args.positional.at(0)));
    auto coh = gg::twisted_cohomology(ps.model, ps.structure.flux.H,
                                      gg::MetricData<S>::identity(ps.model.n));
    gg::Report rep;
    rep.suite = "cohomology";
    rep.mode = gg::scalar_traits<S>::exact ? "exact" : "float";
    rep.fields = {{"scenario", ps.text.name.empty() ? "(unnamed)" : ps.text.name},
                  {"algebra", ps.model.salamon},
                  {"dims", "ev=" + std::to_string(coh.dim_even) +
                               " od=" + std::to_string(coh.dim_odd)}};
    warn_unimodular(ps, rep);
    // harmonic representatives are d_H- and d_H Gt-closed by construction; re-verify
    double r = 0;
    for (const auto* reps : {&coh.harmonic_even, &coh.harmonic_odd})
        for (const auto& tau : *reps) {
            r = std::max(r, gg::d_H(ps.model, ps.structure.flux.H, tau).approx_max());
            auto gt = gg::g_tilde(gg::MetricData<S>::identity(ps.model.n), tau);
            r = std::max(r, gg::d_H(ps.model, ps.structure.flux.H, gt).approx_max());
        }
    double tol = gg::scalar_traits<S>::exact ? 0.0 : 1e-10;
    rep.checks.push_back({"harmonic-representatives", r <= tol, r, ""});
    if (auto it = ps.text.expect.find("dims"); it != ps.text.expect.end()) {
        std::string got = "ev=" + std::to_string(coh.dim_even) + " od=" + std::to_string(coh.dim_odd);
        rep.checks.push_back({"expect-dims", got == it->second, got == it->second ? 0.0 : 1.0, got});
    }
    write_report(rep, args);
    std::cout << "ev=" << coh.dim_even << " od=" << coh.dim_odd << "\n";
    return rep.all_pass() ? 0 : 1;
}

template <class S>
int cmd_susy(const Args& args) {
    auto ps = gg::prepare_scenario<S>(gg::load_scenario_file(args.positional.at(0)));
    auto seed = static_cast<std::uint64_t>(opt_long(args, "seed", 1));
    auto rep = gg::susy_roundtrip(ps, seed);
    warn_unimodular(ps, rep);
    write_report(rep, args);
    return rep.all_pass() ? 0 : 1;
}

template <class S>
int cmd_classify(const Args& args) {
    auto text = gg::load_scenario_file(args.positional.at(0));
    auto ps = gg::prepare_scenario<S>(text);
    auto type = gg::classify_special_type(ps.structure);
    gg::Report rep;
    rep.suite = "classify";
    rep.mode = gg::scalar_traits<S>::exact ? "exact" : "float";
    rep.fields = {{"scenario", ps.text.name.empty() ? "(unnamed)" : ps.text.name},
                  {"algebra", ps.model.salamon},
                  {"type", gg::special_type_name(type)}};
    if (auto it = text.expect.find("classify"); it != text.expect.end()) {
        bool ok = gg::special_type_name(type) == it->second;
        rep.checks.push_back({"expect-classify", ok, ok ? 0.0 : 1.0, gg::special_type_name(type)});
    } else {
        rep.checks.push_back({"classified", true, 0.0, gg::special_type_name(type)});
    }
    write_report(rep, args);
    if (auto it = args.options.find("emit"); it != args.options.end() && !it->second.empty()) {
        std::ofstream out(it->second);
        out << gg::emit_scenario(text);
    }
    return rep.all_pass() ? 0 : 1;
}

template <class S>
int cmd_no_go(const Args& args) {
    auto ps = gg::prepare_scenario<S>(gg::load_scenario_file(args.positional.at(0)));
    auto rep = gg::no_go_probe(ps);
    write_report(rep, args);
    return rep.all_pass() ? 0 : 1;
}

template <class S>
int cmd_critical(const Args& args) {
    auto ps = gg::prepare_scenario<S>(gg::load_scenario_file(args.positional.at(0)));
    auto tau = ps.metric_original.to_frame(
        gg::parse_form<S>(opt_str(args, "tau", ""), ps.model.n));
    auto gamma = ps.metric_original.to_frame(
        gg::parse_form<S>(opt_str(args, "gamma", ""), ps.model.n));
    auto res = gg::constrained_critical_check(ps.model, ps.structure.flux.H,
                                              gg::MetricData<S>::identity(ps.model.n), tau, gamma);
    gg::Report rep;
    rep.suite = "critical";
    rep.mode = gg::scalar_traits<S>::exact ? "exact" : "float";
    rep.fields = {{"scenario", ps.text.name.empty() ? "(unnamed)" : ps.text.name},
                  {"constrained", res.constrained ? "yes" : "no (d_H gamma = 0)"},
                  {"lambda", gg::scalar_traits<S>::display(res.lambda)}};
    double r = gg::scalar_traits<S>::approx_abs(res.residual_sq);
    rep.checks.push_back({"critical-point", res.critical, r,
                          res.constrained ? "" : "unconstrained critical"});
    write_report(rep, args);
    return rep.all_pass() ? 0 : 1;
}

template <class S>
int dispatch(const Args& args) {
    if (args.subcommand == "check-identities") return cmd_check_identities<S>(args);
    if (args.subcommand == "cohomology") return cmd_cohomology<S>(args);
    if (args.subcommand == "susy-check") return cmd_susy<S>(args);
    if (args.subcommand == "classify") return cmd_classify<S>(args);
    if (args.subcommand == "no-go") return cmd_no_go<S>(args);
    if (args.subcommand == "critical") return cmd_critical<S>(args);
    usage(std::cerr);
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    Args args = parse_args(argc, argv);
    if (args.subcommand.empty() || args.subcommand == "help" || args.subcommand == "--help") {
        usage(args.subcommand.empty() ? std::cerr : std::cout);
        return args.subcommand.empty() ? 2 : 0;
    }
    std::string mode = opt_str(args, "mode", "exact");
    try {
        if (mode == "exact") return dispatch<gg::Exact>(args);
        if (mode == "float") return dispatch<gg::Floating>(args);
        std::cerr << "ggtool: unknown mode '" << mode << "'\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "ggtool: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "ggtool: error: " << e.what() << "\n";
        return 1;
    }
}
