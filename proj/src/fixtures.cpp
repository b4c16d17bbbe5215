#include "pointlim/fixtures.hpp"

#include <cmath>
#include <functional>

namespace pointlim {

double find_root_1d(const std::function<double(double)>& fn, double lo, double hi) {
    double flo = fn(lo), fhi = fn(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0) throw Error("find_root_1d: the bracket does not straddle a root");
    for (int it = 0; it < 200; ++it) {
        double mid = (std::abs(fhi - flo) > 1e-300)
                         ? lo - flo * (hi - lo) / (fhi - flo)  // secant proposal
                         : 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) mid = 0.5 * (lo + hi);
        double fmid = fn(mid);
        if (fmid == 0.0 || hi - lo < 1e-15 * (1.0 + std::abs(mid))) return mid;
        if (flo * fmid < 0.0) {
            hi = mid;
            fhi = fmid;
        } else {
            lo = mid;
            flo = fmid;
        }
    }
    return 0.5 * (lo + hi);
}

namespace {

Profile real_poly(std::initializer_list<double> coeffs) {
    std::vector<Cplx> c;
    for (double v : coeffs) c.emplace_back(v, 0.0);
    return Profile::poly(std::move(c));
}

// derivative of a profile given on [-1, 1] as a single polynomial
Profile derivative_profile(const Profile& p) { return Profile(p.pw().derivative()); }

// the orthonormal odd companion of bump_odd: (3 sqrt(1155)/8) x (1-x^2)(1/3 - x^2)
Profile odd_companion() {
    double s = 3.0 * std::sqrt(1155.0) / 8.0;
    // x/3 - (4/3) x^3 + x^5
    return real_poly({0.0, s / 3.0, 0.0, -4.0 * s / 3.0, 0.0, s});
}

// a1, a2 functionals of a Double-resonant pair for a given q
struct OmegaMoments {
    double a1, a2, a0;
};
OmegaMoments omega_moments(const Triple& t) {
    InvariantSet inv = compute_invariants(t);
    return {inv.a1.real(), inv.a2, inv.a0};
}

Triple with_q(const Triple& t, Profile q) { return Triple(t.f, t.g, std::move(q)); }

}  // namespace

const std::vector<std::string>& fixture_names() {
    static const std::vector<std::string> names{
        "a1_fixture",     "a1_complex", "a1_delta_prime", "a2_fixture", "a3_fixture",
        "a3_kappa0",      "b1_fixture", "b1_neumann",     "b2_fixture", "b3_lambda",
        "b3_sigma",       "b3_kappa0",  "pseudo_hamiltonian", "free_line", "delta_q",
    };
    return names;
}

bool is_fixture(const std::string& name) {
    for (const auto& n : fixture_names())
        if (n == name) return true;
    return false;
}

Fixture make_fixture(const std::string& name, const std::map<std::string, double>& params) {
    auto param = [&](const std::string& key, double dflt) {
        auto it = params.find(key);
        return it == params.end() ? dflt : it->second;
    };

    // the double-resonance pair: f = F', g = G' for the orthonormal bumps
    Profile f_bump = derivative_profile(Profile::bump_even());  // -(sqrt(15)/2) x
    Profile g_bump = derivative_profile(Profile::bump_odd());   // (sqrt(105)/4)(1-3x^2)
    // the kappa = 0 pair: derivatives of two orthonormal odd functions
    Profile f_odd = derivative_profile(Profile::bump_odd());
    Profile g_odd = derivative_profile(odd_companion());

    if (name == "a1_fixture") {
        return {name, Triple(f_bump, g_bump, Profile::constant(1.0)), CaseTag::A1,
                "double resonance, q = 1: full coupling matrix with phase pi"};
    }
    if (name == "a1_complex") {
        double chi = param("chi", 0.6);
        Profile g = std::exp(Cplx{0.0, chi}) * g_bump;
        return {name, Triple(f_bump, g, Profile::constant(1.0)), CaseTag::A1,
                "complex pair: nontrivial phase parameter without a gauge field"};
    }
    if (name == "a1_delta_prime") {
        // tune q = x + c x^3 so that a1 = 0 (a0 = 0 by parity): the classic
        // delta'-interaction of strength beta = kappa^2 / a2
        Triple base(f_bump, g_bump, Profile::constant(0.0));
        auto a1_of = [&](double c) {
            return omega_moments(with_q(base, real_poly({0.0, 1.0, 0.0, c}))).a1;
        };
        double c = find_root_1d(a1_of, -4.0, 0.0);
        return {name, with_q(base, real_poly({0.0, 1.0, 0.0, c})), CaseTag::A1,
                "q tuned so a1 = 0, a0 = 0: classic delta' interaction"};
    }
    if (name == "a2_fixture") {
        return {name,
                Triple(Profile::constant(1.0), real_poly({7.5, 7.5}), Profile::constant(0.0)),
                CaseTag::A2, "sigma resonance: phase pi, coupling diag(4, 1/4)"};
    }
    if (name == "a3_fixture") {
        return {name, Triple(real_poly({0.0, 1.0}), real_poly({1.0, 0.0, -3.0}),
                             Profile::constant(1.0)),
                CaseTag::A3, "pi != 0: delta interaction of strength a0 = 2"};
    }
    if (name == "a3_kappa0") {
        // kappa = 0 pair with q = 1 + d1 (1-3x^2) + d2 P4 solving a1 = a2 = 0
        Triple base(f_odd, g_odd, Profile::constant(1.0));
        Profile u1 = real_poly({1.0, 0.0, -3.0});
        Profile u2 = real_poly({3.0 / 8.0, 0.0, -30.0 / 8.0, 0.0, 35.0 / 8.0});
        OmegaMoments m0 = omega_moments(with_q(base, Profile::constant(1.0)));
        OmegaMoments m1 = omega_moments(with_q(base, u1));
        OmegaMoments m2 = omega_moments(with_q(base, u2));
        Eigen::Matrix2d a;
        a << m1.a1, m2.a1, m1.a2, m2.a2;
        Eigen::Vector2d rhs(-m0.a1, -m0.a2);
        Eigen::Vector2d d = a.fullPivLu().solve(rhs);
        Profile q = Profile::constant(1.0) + d(0) * u1 + d(1) * u2;
        return {name, with_q(base, q), CaseTag::A3,
                "double resonance with kappa = 0 and a1 = a2 = 0: delta of strength 2"};
    }
    if (name == "b1_fixture") {
        // q = 1 + c x tuned so a2 = kappa a1 (kappa real here)
        Triple base(f_bump, g_bump, Profile::constant(0.0));
        double kappa = std::sqrt(15.0) / 3.0;
        auto gap = [&](double c) {
            OmegaMoments m = omega_moments(with_q(base, real_poly({1.0, c})));
            return m.a2 - kappa * m.a1;
        };
        double c = find_root_1d(gap, -2.0, 2.0);
        return {name, with_q(base, real_poly({1.0, c})), CaseTag::B1,
                "double resonance with a2 = kappa a1: Robin-Robin limit"};
    }
    if (name == "b1_neumann") {
        return {name, Triple(f_bump, g_bump, Profile::constant(0.0)), CaseTag::B1,
                "double resonance with q = 0: Neumann-Neumann limit"};
    }
    if (name == "b2_fixture") {
        // shape (1-x) + b (1-3x^2): scale to lambda = 0, then tune b so the
        // half-bound state vanishes at the left endpoint
        Profile f = Profile::constant(1.0);
        auto resonant = [&](double b) {
            Profile shape = real_poly({1.0 + b, -1.0, -3.0 * b});
            auto t = tune_resonance(f, shape);
            if (!t) throw Error("b2_fixture: resonance tuning unexpectedly failed");
            return Triple(f, *t * shape, Profile::constant(1.0));
        };
        double b = find_root_1d(
            [&](double bb) {
                return compute_invariants(resonant(bb)).sigma_state_minus.real();
            },
            1.0, 3.0);
        return {name, resonant(b), CaseTag::B2,
                "sigma(-1) = 0: Dirichlet-Robin limit with theta+ = sigma*/sigma+^2"};
    }
    if (name == "b3_lambda" || name == "pseudo_hamiltonian") {
        double alpha = param("alpha", 1.0);
        // f0 = alpha, g0 = 0, g1 = -1: lambda = alpha^2 ||g^(-1)||^2 != 0
        return {name, Triple(Profile::constant(alpha / 2.0), real_poly({0.0, -1.5}),
                             Profile::constant(param("beta", 1.0))),
                CaseTag::B3, "pseudo-Hamiltonian regularization: lambda != 0"};
    }
    if (name == "b3_sigma") {
        // even shape 1 + beta (1-3x^2): f1 = g1 = 0 forces sigma(-1) = sigma(1);
        // scale to lambda = 0, tune beta so both endpoint values vanish
        Profile f = Profile::constant(1.0);
        auto resonant = [&](double beta) {
            Profile shape = real_poly({1.0 + beta, 0.0, -3.0 * beta});
            auto t = tune_resonance(f, shape);
            if (!t) throw Error("b3_sigma: resonance tuning unexpectedly failed");
            return Triple(f, *t * shape, Profile::constant(1.0));
        };
        double beta = find_root_1d(
            [&](double bb) {
                return compute_invariants(resonant(bb)).sigma_state_plus.real();
            },
            -4.0, -2.0);
        return {name, resonant(beta), CaseTag::B3,
                "sigma vanishes at both endpoints: Dirichlet-Dirichlet"};
    }
    if (name == "b3_kappa0") {
        // kappa = 0 pair with q = 1 + c (1-3x^2) tuned so a2 = 0 while a1 != 0
        Triple base(f_odd, g_odd, Profile::constant(1.0));
        auto a2_of = [&](double c) {
            return omega_moments(with_q(base, Profile::constant(1.0) + c * real_poly({1.0, 0.0, -3.0})))
                .a2;
        };
        double c = find_root_1d(a2_of, -4.0, 0.0);
        Profile q = Profile::constant(1.0) + c * real_poly({1.0, 0.0, -3.0});
        return {name, with_q(base, q), CaseTag::B3,
                "kappa = 0, a2 = 0, a1 != 0: Dirichlet-Dirichlet limit"};
    }
    if (name == "free_line") {
        return {name, Triple(Profile(), Profile(), Profile::constant(0.0)), CaseTag::A3,
                "no perturbation at all; solvers only"};
    }
    if (name == "delta_q") {
        double c = param("strength", 1.0);
        return {name, Triple(Profile(), Profile(), Profile::constant(c / 2.0)), CaseTag::A3,
                "pure delta-like potential, a0 = strength; solvers only"};
    }
    throw Error("unknown fixture: " + name);
}

}  // namespace pointlim
