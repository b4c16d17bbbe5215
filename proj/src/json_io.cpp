#include "pointlim/json_io.hpp"

#include <charconv>
#include <cmath>

#include "pointlim/fixtures.hpp"

namespace pointlim {

double parse_number(const Json& v) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        std::string s = v.get<std::string>();
        auto slash = s.find('/');
        if (slash != std::string::npos) {
            double p = std::stod(s.substr(0, slash));
            double q = std::stod(s.substr(slash + 1));
            if (q == 0.0) throw Error("rational literal with zero denominator: " + s);
            return p / q;
        }
        size_t used = 0;
        double x = std::stod(s, &used);
        if (used != s.size()) throw Error("malformed number literal: " + s);
        return x;
    }
    throw Error("expected a number, got: " + v.dump());
}

namespace {

Cplx parse_cplx(const Json& v) {
    if (v.is_array()) {
        if (v.size() != 2) throw Error("complex literal must be [re, im]");
        return {parse_number(v[0]), parse_number(v[1])};
    }
    return {parse_number(v), 0.0};
}

PiecewisePoly pieces_from_json(const Json& v) {
    std::vector<double> breaks;
    std::vector<Polynomial> pieces;
    if (!v.is_array() || v.empty()) throw Error("\"pieces\" must be a non-empty array");
    for (const auto& piece : v) {
        if (!piece.contains("lo") || !piece.contains("hi") || !piece.contains("coeffs"))
            throw Error("profile piece needs fields lo, hi, coeffs");
        double lo = parse_number(piece["lo"]);
        double hi = parse_number(piece["hi"]);
        std::vector<Cplx> c;
        for (const auto& cv : piece["coeffs"]) c.push_back(parse_cplx(cv));
        if (breaks.empty()) {
            breaks.push_back(lo);
        } else if (std::abs(breaks.back() - lo) > 1e-14) {
            throw Error("profile pieces must be contiguous (field \"lo\")");
        }
        breaks.push_back(hi);
        pieces.emplace_back(std::move(c));
    }
    return PiecewisePoly(std::move(breaks), std::move(pieces));
}

}  // namespace

PiecewisePoly pw_from_json(const Json& v) {
    if (v.is_null()) return Profile::constant(0.0).pw();
    if (v.is_number() || v.is_string()) return Profile::constant(parse_number(v)).pw();
    if (v.contains("builtin")) {
        std::string b = v["builtin"].get<std::string>();
        double scale = v.contains("scale") ? parse_number(v["scale"]) : 1.0;
        Profile base;
        if (b == "bump_even") base = Profile::bump_even();
        else if (b == "bump_odd") base = Profile::bump_odd();
        else throw Error("unknown builtin profile family: " + b);
        return (scale * base).pw();
    }
    if (v.contains("const")) return Profile::constant(parse_cplx(v["const"])).pw();
    if (v.contains("poly")) {
        std::vector<Cplx> c;
        for (const auto& cv : v["poly"]) c.push_back(parse_cplx(cv));
        return Profile::poly(std::move(c)).pw();
    }
    if (v.contains("pieces")) return pieces_from_json(v["pieces"]);
    throw Error("profile literal needs one of: pieces, const, poly, builtin");
}

Profile profile_from_json(const Json& v) { return Profile(pw_from_json(v)); }

Json profile_to_json(const Profile& p) {
    Json pieces = Json::array();
    const auto& pw = p.pw();
    for (size_t i = 0; i < pw.pieces().size(); ++i) {
        Json coeffs = Json::array();
        for (const auto& c : pw.pieces()[i].coeffs())
            coeffs.push_back(Json::array({c.real(), c.imag()}));
        pieces.push_back(Json{{"lo", pw.breaks()[i]}, {"hi", pw.breaks()[i + 1]},
                              {"coeffs", std::move(coeffs)}});
    }
    return Json{{"pieces", std::move(pieces)}};
}

Triple triple_from_json(const Json& v, double* rescale_factor, std::string* note) {
    if (rescale_factor) *rescale_factor = 1.0;
    if (v.contains("fixture")) {
        std::string name = v["fixture"].get<std::string>();
        std::map<std::string, double> params;
        for (const auto& [key, val] : v.items())
            if (key != "fixture" && val.is_number()) params[key] = val.get<double>();
        Fixture fx = make_fixture(name, params);
        if (note) *note = fx.note;
        return fx.triple;
    }
    if (!v.contains("f") || !v.contains("g"))
        throw Error("triple needs fields \"f\" and \"g\" (or \"fixture\")");
    PiecewisePoly f = pw_from_json(v["f"]);
    PiecewisePoly g = pw_from_json(v["g"]);
    PiecewisePoly q = Profile::constant(0.0).pw();
    if (v.contains("q")) {
        q = pw_from_json(v["q"]);
    } else if (note) {
        *note = "q omitted; defaulting to q = 0";
    }
    // inputs supported in a wider window [-r, r] are rescaled to [-1, 1]
    NormalizedTriple nt = normalize_support(f, g, q);
    if (rescale_factor) *rescale_factor = nt.factor;
    return Triple(std::move(nt.f), std::move(nt.g), std::move(nt.q));
}

Json to_json(const LimitInteraction& li) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["case"] = to_string(li.tag);
    j["kind"] = li.kind == LimitInteraction::Connected ? "connected" : "separated";
    if (li.kind == LimitInteraction::Connected) {
        j["phase"] = li.phase;
        j["matrix"] = Json::array({Json::array({li.coupling(0, 0), li.coupling(0, 1)}),
                                   Json::array({li.coupling(1, 0), li.coupling(1, 1)})});
    } else {
        auto bc = [](const BoundaryCondition& b) {
            Json out;
            out["type"] = b.kind == BoundaryCondition::Dirichlet ? "dirichlet" : "robin";
            if (b.kind == BoundaryCondition::Robin) out["theta"] = b.theta;
            return out;
        };
        j["left"] = bc(li.left);
        j["right"] = bc(li.right);
    }
    j["margins"] = Json(li.margins);
    j["unstable"] = li.unstable;
    return j;
}

LimitInteraction interaction_from_json(const Json& v) {
    LimitInteraction li;
    std::string tag = v.at("case").get<std::string>();
    for (CaseTag t : {CaseTag::A1, CaseTag::A2, CaseTag::A3, CaseTag::B1, CaseTag::B2, CaseTag::B3})
        if (tag == to_string(t)) li.tag = t;
    if (v.at("kind").get<std::string>() == "connected") {
        li.kind = LimitInteraction::Connected;
        li.phase = parse_number(v.at("phase"));
        const auto& m = v.at("matrix");
        li.coupling << parse_number(m[0][0]), parse_number(m[0][1]), parse_number(m[1][0]),
            parse_number(m[1][1]);
    } else {
        li.kind = LimitInteraction::Separated;
        auto bc = [](const Json& b) {
            if (b.at("type").get<std::string>() == "dirichlet")
                return BoundaryCondition::dirichlet();
            return BoundaryCondition::robin(parse_number(b.at("theta")));
        };
        li.left = bc(v.at("left"));
        li.right = bc(v.at("right"));
    }
    if (v.contains("margins"))
        for (const auto& [key, val] : v.at("margins").items())
            li.margins[key] = val.get<double>();
    if (v.contains("unstable")) li.unstable = v.at("unstable").get<bool>();
    return li;
}

Json to_json(const InvariantSet& inv) {
    auto cplx = [](Cplx z) { return Json::array({z.real(), z.imag()}); };
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["f0"] = cplx(inv.f0);
    j["g0"] = cplx(inv.g0);
    j["f1"] = cplx(inv.f1);
    j["g1"] = cplx(inv.g1);
    j["pi"] = inv.pi_val;
    j["theta_phase"] = inv.theta_phase;
    j["lambda"] = inv.lambda_val;
    j["kappa"] = cplx(inv.kappa);
    j["sigma_minus"] = cplx(inv.sigma_minus);
    j["sigma_plus"] = cplx(inv.sigma_plus);
    j["sigma_star"] = inv.sigma_star;
    j["a0"] = inv.a0;
    j["a1"] = cplx(inv.a1);
    j["a2"] = inv.a2;
    j["zero_mean"] = inv.zero_mean;
    j["a_coefficients_applicable"] = inv.zero_mean;
    j["warnings"] = inv.warnings;
    return j;
}

Json to_json(const HalfBoundStateReport& rep, int sample_points) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = to_string(rep.kind);
    j["residual"] = rep.residual;
    Json states = Json::array();
    for (const auto& u : rep.states) {
        Json xs = Json::array(), re = Json::array(), im = Json::array();
        for (int i = 0; i < sample_points; ++i) {
            double x = -1.5 + 3.0 * double(i) / double(sample_points - 1);
            Cplx v = u.eval(x);
            xs.push_back(x);
            re.push_back(v.real());
            im.push_back(v.imag());
        }
        states.push_back(Json{{"x", xs}, {"re", re}, {"im", im}});
    }
    j["states"] = std::move(states);
    return j;
}

Json to_json(const ConvergenceReport& rep) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["metric"] = rep.metric;
    if (rep.metric == "scattering_at_k" || rep.metric == "inner_expansion_L2") j["k"] = rep.k;
    if (rep.metric == "resolvent_L2_sample")
        j["zeta"] = Json::array({rep.zeta.real(), rep.zeta.imag()});
    Json pts = Json::array();
    for (const auto& p : rep.points)
        pts.push_back(Json{{"eps", p.eps}, {"error", p.error}, {"ok", p.ok}, {"flag", p.flag}});
    j["points"] = std::move(pts);
    j["exact"] = rep.exact;
    j["fitted"] = rep.fitted;
    if (rep.fitted) {
        j["slope"] = rep.fit.slope;
        j["intercept"] = rep.fit.intercept;
        j["residual"] = rep.fit.residual;
    }
    return j;
}

}  // namespace pointlim
