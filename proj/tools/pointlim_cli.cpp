// Command-line front door: classify / scatter / converge / resonance over
// triple configurations, JSON and CSV out.
//
// Exit codes: 0 ok, 1 input error, 2 unstable classification (strict mode),
// 3 convergence below the slope threshold.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "pointlim/convergence.hpp"
#include "pointlim/fixtures.hpp"
#include "pointlim/json_io.hpp"
#include "pointlim/point_ops.hpp"

using namespace pointlim;

namespace {

constexpr double kSlopeThreshold = 0.45;

struct Options {
    std::string input, output, csv_output, fixture, format;  // scatter: csv (default) | json
    double tol_rel = 1e-9, tol_abs = 1e-12;
    bool strict = false;
    std::string eps_spec, zeta_spec, k_spec, metric, override_limit;
};

Json load_config(const Options& o) {
    Json cfg = Json::object();
    if (!o.input.empty()) {
        std::ifstream in(o.input);
        if (!in) throw Error("cannot open input file: " + o.input);
        try {
            in >> cfg;
        } catch (const std::exception& e) {
            throw Error("malformed JSON in " + o.input + ": " + e.what());
        }
    }
    if (!o.fixture.empty()) {
        // "name key=value ..." shorthand
        std::istringstream ss(o.fixture);
        std::string name;
        ss >> name;
        Json t;
        t["fixture"] = name;
        std::string kv;
        while (ss >> kv) {
            auto eq = kv.find('=');
            if (eq == std::string::npos) throw Error("fixture parameter must be key=value: " + kv);
            t[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
        }
        cfg["triple"] = t;
    }
    if (cfg.contains("V")) {
        bool zero = cfg["V"].is_number() && cfg["V"].get<double>() == 0.0;
        if (!zero) throw Error("a background potential V is configured; solvers require V = 0");
    }
    return cfg;
}

Triple config_triple(const Json& cfg, double* factor, std::string* note) {
    if (!cfg.contains("triple")) throw Error("config needs a \"triple\" (or --fixture)");
    return triple_from_json(cfg["triple"], factor, note);
}

Tolerances config_tol(const Json& cfg, const Options& o) {
    Tolerances tol{o.tol_rel, o.tol_abs};
    if (cfg.contains("tolerances")) {
        const auto& t = cfg["tolerances"];
        if (t.contains("rel")) tol.rel = parse_number(t["rel"]);
        if (t.contains("abs")) tol.abs = parse_number(t["abs"]);
    }
    return tol;
}

std::vector<double> parse_eps(const std::string& spec, const Json& cfg) {
    std::string s = spec;
    if (s.empty() && cfg.contains("eps")) {
        if (cfg["eps"].is_array()) {
            std::vector<double> out;
            for (const auto& v : cfg["eps"]) out.push_back(parse_number(v));
            return out;
        }
        s = cfg["eps"].get<std::string>();
    }
    if (s.empty()) throw Error("no eps grid given (flag --eps or config key \"eps\")");
    // "a:b:n" geometric grid from a down to b with n points
    double a, b;
    int n;
    if (std::sscanf(s.c_str(), "%lf:%lf:%d", &a, &b, &n) != 3 || n < 1 || a <= 0.0 || b <= 0.0)
        throw Error("eps grid must be \"a:b:n\" with positive endpoints: " + s);
    std::vector<double> out;
    if (n == 1) return {a};
    double ratio = std::pow(b / a, 1.0 / double(n - 1));
    for (int i = 0; i < n; ++i) out.push_back(a * std::pow(ratio, double(i)));
    return out;
}

std::vector<double> parse_k(const std::string& spec, const Json& cfg) {
    std::string s = spec;
    std::vector<double> out;
    if (s.empty() && cfg.contains("k")) {
        if (cfg["k"].is_array()) {
            for (const auto& v : cfg["k"]) out.push_back(parse_number(v));
            return out;
        }
        return {parse_number(cfg["k"])};
    }
    if (s.empty()) throw Error("no wavenumber given (flag --k or config key \"k\")");
    std::istringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    if (out.empty()) throw Error("empty k list");
    return out;
}

Cplx parse_zeta(const std::string& spec, const Json& cfg) {
    if (!spec.empty()) {
        double re, im;
        if (std::sscanf(spec.c_str(), "%lf,%lf", &re, &im) != 2)
            throw Error("zeta must be \"re,im\": " + spec);
        return {re, im};
    }
    if (cfg.contains("zeta")) {
        const auto& z = cfg["zeta"];
        if (z.is_array() && z.size() == 2) return {parse_number(z[0]), parse_number(z[1])};
        throw Error("config key \"zeta\" must be [re, im]");
    }
    throw Error("no zeta given (flag --zeta or config key \"zeta\")");
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out) throw Error("cannot open output file: " + path);
    out << text;
}

std::string csv_row(double eps, const ScatteringData& s, const std::string& status) {
    char buf[512];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%s",
                  eps, s.k, s.t.real(), s.t.imag(), s.r_left.real(), s.r_left.imag(),
                  s.r_right.real(), s.r_right.imag(), s.unitarity_defect(), status.c_str());
    return buf;
}

int cmd_classify(const Options& o) {
    Json cfg = load_config(o);
    double factor = 1.0;
    std::string note;
    Triple t = config_triple(cfg, &factor, &note);
    Tolerances tol = config_tol(cfg, o);
    bool strict = o.strict || (cfg.contains("strict") && cfg["strict"].get<bool>());
    LimitInteraction li = classify(t, tol, strict);
    Json out = to_json(li);
    if (factor != 1.0) out["support_rescale_factor"] = factor;
    if (!note.empty()) out["note"] = note;
    emit(o.output, out.dump(2));
    return 0;
}

int cmd_resonance(const Options& o) {
    Json cfg = load_config(o);
    std::string note;
    Triple t = config_triple(cfg, nullptr, &note);
    Tolerances tol = config_tol(cfg, o);
    InvariantSet inv = compute_invariants(t, tol);
    HalfBoundStateReport rep = half_bound_states(t, tol);
    LemmaMatrix lm = lemma_matrix(t);
    Json out;
    out["schema_version"] = kSchemaVersion;
    out["invariants"] = to_json(inv);
    out["half_bound_states"] = to_json(rep);
    out["det_A"] = Json::array({lm.det.real(), lm.det.imag()});
    out["det_A_minus_lambda"] = std::abs(lm.det - Cplx{inv.lambda_val, 0.0});
    if (!note.empty()) out["note"] = note;
    emit(o.output, out.dump(2));
    return 0;
}

int cmd_scatter(const Options& o) {
    Json cfg = load_config(o);
    Triple t = config_triple(cfg, nullptr, nullptr);
    Tolerances tol = config_tol(cfg, o);
    std::vector<double> eps = parse_eps(o.eps_spec, cfg);
    std::vector<double> ks = parse_k(o.k_spec, cfg);
    if (eps.empty()) throw Error("empty eps list");

    LimitInteraction li = t.trivial_pair() ? delta_limit(moment(t.q, 0).real())
                                           : classify(t, tol, o.strict);
    std::ostringstream csv;
    csv << "eps,k,re_t,im_t,re_r_left,im_r_left,re_r_right,im_r_right,unitarity_defect,status\n";
    Json jrows = Json::array();
    auto add_row = [&](double e, const ScatteringData& s, const std::string& status) {
        csv << csv_row(e, s, status) << "\n";
        jrows.push_back(Json{{"eps", e},
                             {"k", s.k},
                             {"t", Json::array({s.t.real(), s.t.imag()})},
                             {"r_left", Json::array({s.r_left.real(), s.r_left.imag()})},
                             {"r_right", Json::array({s.r_right.real(), s.r_right.imag()})},
                             {"unitarity_defect", s.unitarity_defect()},
                             {"status", status}});
    };
    size_t failures = 0, rows = 0;
    for (double k : ks) {
        // eps = 0 sentinel row: the limit operator
        add_row(0.0, scattering_limit(li, k), "ok");
        for (double e : eps) {
            ++rows;
            try {
                add_row(e, scattering_eps(t, e, k, {}), "ok");
            } catch (const Error& err) {
                ScatteringData blank;
                blank.k = k;
                std::string status = std::string("error: ") + err.what();
                for (auto& c : status)
                    if (c == ',' || c == '\n') c = ';';
                add_row(e, blank, status);
                ++failures;
            }
        }
    }
    if (o.format == "json") {
        Json out;
        out["schema_version"] = kSchemaVersion;
        out["rows"] = std::move(jrows);
        emit(o.output, out.dump(2));
    } else {
        emit(o.output.empty() ? o.csv_output : o.output, csv.str());
    }
    return failures == rows && rows > 0 ? 1 : 0;
}

int cmd_converge(const Options& o) {
    Json cfg = load_config(o);
    Triple t = config_triple(cfg, nullptr, nullptr);
    Tolerances tol = config_tol(cfg, o);
    std::vector<double> eps = parse_eps(o.eps_spec, cfg);
    std::string metric = !o.metric.empty()
                             ? o.metric
                             : (cfg.contains("metric") ? cfg["metric"].get<std::string>()
                                                       : std::string("scattering"));

    std::optional<LimitInteraction> target;
    if (!o.override_limit.empty()) target = interaction_from_json(Json::parse(o.override_limit));
    else if (cfg.contains("override_limit")) target = interaction_from_json(cfg["override_limit"]);
    if (!target)
        target = t.trivial_pair() ? delta_limit(moment(t.q, 0).real()) : classify(t, tol, o.strict);

    ConvergenceReport rep;
    if (metric == "scattering" || metric == "scattering_at_k") {
        double k = parse_k(o.k_spec, cfg).at(0);
        rep = scattering_convergence_target(t, *target, k, eps);
    } else if (metric == "resolvent" || metric == "resolvent_L2_sample") {
        Cplx zeta = parse_zeta(o.zeta_spec, cfg);
        if (zeta.imag() == 0.0) throw Error("resolvent metric requires Im zeta != 0");
        if (!cfg.contains("h")) throw Error("resolvent metric needs a right-hand side \"h\"");
        PiecewisePoly h = pw_from_json(cfg["h"]);
        rep = resolvent_convergence_target(t, *target, zeta, h, eps);
    } else {
        throw Error("unknown metric: " + metric + " (use scattering|resolvent)");
    }

    bool pass = rep.exact || (rep.fitted && rep.fit.slope >= kSlopeThreshold);
    Json out = to_json(rep);
    out["slope_threshold"] = kSlopeThreshold;
    out["pass"] = pass;
    emit(o.output, out.dump(2));
    if (!o.csv_output.empty()) {
        std::ostringstream csv;
        csv << "eps,error,flag\n";
        for (const auto& p : rep.points)
            csv << p.eps << "," << p.error << "," << (p.ok ? p.flag : "error") << "\n";
        emit(o.csv_output, csv.str());
    }
    return pass ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"norm-resolvent limits of 1-D Schrodinger operators with shrinking "
                 "rank-two perturbations: classify, scatter, converge, resonance"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--input", o.input, "JSON config path");
        cmd->add_option("--output", o.output, "output path (default stdout)");
        cmd->add_option("--fixture", o.fixture, "builtin fixture, e.g. \"pseudo_hamiltonian alpha=1\"");
        cmd->add_option("--tol-rel", o.tol_rel, "relative zero-test tolerance");
        cmd->add_option("--tol-abs", o.tol_abs, "absolute zero-test tolerance");
        cmd->add_flag("--strict", o.strict, "fail on near-boundary classifications");
        cmd->add_option("--format", o.format, "json|csv");
    };

    CLI::App* c_classify = app.add_subcommand("classify", "classify the norm-resolvent limit");
    add_common(c_classify);

    CLI::App* c_scatter = app.add_subcommand("scatter", "scattering rows over an (eps, k) grid");
    add_common(c_scatter);
    c_scatter->add_option("--eps", o.eps_spec, "geometric grid a:b:n");
    c_scatter->add_option("--k", o.k_spec, "comma-separated wavenumbers");
    c_scatter->add_option("--csv", o.csv_output, "CSV output path");

    CLI::App* c_converge = app.add_subcommand("converge", "error decay against the limit");
    add_common(c_converge);
    c_converge->add_option("--eps", o.eps_spec, "geometric grid a:b:n");
    c_converge->add_option("--k", o.k_spec, "wavenumber (scattering metric)");
    c_converge->add_option("--zeta", o.zeta_spec, "spectral point re,im (resolvent metric)");
    c_converge->add_option("--metric", o.metric, "scattering|resolvent");
    c_converge->add_option("--csv", o.csv_output, "CSV output path for the error rows");
    c_converge->add_option("--override-limit", o.override_limit,
                           "JSON interaction overriding the classified limit");

    CLI::App* c_resonance = app.add_subcommand("resonance", "invariants and half-bound states");
    add_common(c_resonance);

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_classify->parsed()) return cmd_classify(o);
        if (c_scatter->parsed()) return cmd_scatter(o);
        if (c_converge->parsed()) return cmd_converge(o);
        if (c_resonance->parsed()) return cmd_resonance(o);
    } catch (const UnstableClassification& e) {
        std::cerr << "unstable classification: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
