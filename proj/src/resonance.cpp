#include "pointlim/resonance.hpp"

#include <cmath>

namespace pointlim {

namespace {

constexpr double kDepTol = 1e-12;  // Gram-determinant linear-independence threshold

TailedProfile combine_tails(Cplx ca, const TailedProfile& a, Cplx cb, const TailedProfile& b) {
    TailedProfile r = a;
    r *= ca;
    TailedProfile s = b;
    s *= cb;
    r += s;
    return r;
}

}  // namespace

Triple::Triple(Profile f_in, Profile g_in, Profile q_in)
    : f(std::move(f_in)), g(std::move(g_in)), q(std::move(q_in)) {
    if (q.max_imag_coeff() != 0.0)
        throw InvalidProfile("q must be real-valued");
    if (trivial_pair()) return;
    double nf = l2norm(f), ng = l2norm(g);
    Cplx fg = inner(f, g);
    double gram = nf * nf * ng * ng - std::norm(fg);
    if (!(gram > kDepTol * nf * nf * ng * ng))
        throw LinearDependence("f and g must be linearly independent in L2");
}

const char* to_string(ResonanceKind k) {
    switch (k) {
        case ResonanceKind::None: return "None";
        case ResonanceKind::ConstOnly: return "ConstOnly";
        case ResonanceKind::Sigma: return "Sigma";
        case ResonanceKind::Double: return "Double";
    }
    return "?";
}

InvariantSet compute_invariants(const Triple& t, const Tolerances& tol) {
    if (t.trivial_pair())
        throw LinearDependence("resonance invariants need a nontrivial pair (f, g)");
    InvariantSet inv;

    inv.f0 = moment(t.f, 0);
    inv.g0 = moment(t.g, 0);
    inv.f1 = moment(t.f, 1);
    inv.g1 = moment(t.g, 1);
    inv.a0 = moment(t.q, 0).real();
    inv.q_l1 = l2norm(t.q) * std::sqrt(2.0);  // |I|^{1/2} ||q||_2 bounds ||q||_1

    TailedProfile f1a = antiderivative(t.f, 1);
    TailedProfile g1a = antiderivative(t.g, 1);
    TailedProfile f2a = antiderivative(t.f, 2);
    TailedProfile g2a = antiderivative(t.g, 2);

    double nf = l2norm(f1a), ng = l2norm(g1a);
    Cplx p = inner(f1a, g1a);
    inv.pi_val = nf * ng - std::abs(p + 1.0);
    inv.scale_pi = nf * ng + std::abs(p) + 1.0;
    inv.theta_phase = std::arg(p + 1.0);

    // lambda = ||g0 f^(-1) - f0 g^(-1)||^2 - 2 Re(f0 conj(g0))
    TailedProfile resfun = combine_tails(inv.g0, f1a, -inv.f0, g1a);
    double n2 = inner(resfun, resfun).real();
    double cross = 2.0 * (inv.f0 * std::conj(inv.g0)).real();
    inv.lambda_val = n2 - cross;
    inv.scale_lambda = n2 + std::abs(cross) + 1.0;

    inv.scale_mean_f = l2norm(t.f) * std::sqrt(2.0) + 1e-6;
    inv.scale_mean_g = l2norm(t.g) * std::sqrt(2.0) + 1e-6;

    // omega and kappa (raw formula; meaningful when f0 = g0 = 0)
    Cplx phase = std::exp(Cplx{0.0, inv.theta_phase});
    inv.omega = combine_tails(phase * ng, f2a, -nf, g2a);
    inv.kappa = inv.omega.eval(1.0);
    inv.omega_sup = inv.omega.core.sup_norm(-1.0, 1.0);
    inv.scale_kappa = inv.omega_sup + tol.abs;

    inv.zero_mean = tol.is_zero(inv.f0, inv.scale_mean_f) && tol.is_zero(inv.g0, inv.scale_mean_g);

    // sigma = |g0|^2 (conj(f0) f^(-2) - <f,f^(-2)>) - |f0|^2 (conj(g0) g^(-2) - <g,g^(-2)>)
    Cplx ff2 = inner(t.f, f2a);
    Cplx gg2 = inner(t.g, g2a);
    Cplx fg2 = inner(t.f, g2a);
    double af = std::norm(inv.g0), ag = std::norm(inv.f0);
    TailedProfile sigma = combine_tails(af * std::conj(inv.f0), f2a, -ag * std::conj(inv.g0), g2a);
    Cplx c0 = -af * ff2 + ag * gg2;
    sigma += TailedProfile::constant(c0);
    inv.sigma = sigma;
    inv.sigma_minus = sigma.eval(-1.0);
    inv.sigma_plus = sigma.eval(1.0);

    // kernel element of the lemma system: same f^(-2)/g^(-2) combination, but
    // the constant from the first row of A c = 0 (no row-dependence needed)
    Cplx tker = std::conj(inv.f0) * std::conj(inv.g0);
    TailedProfile sigst = combine_tails(tker * inv.g0, f2a, -tker * inv.f0, g2a);
    Cplx c3 = inv.f0 * std::conj(inv.g0) * (fg2 - 1.0) - af * ff2;
    sigst += TailedProfile::constant(c3);
    inv.sigma_state = sigst;
    inv.sigma_state_minus = sigst.eval(-1.0);
    inv.sigma_state_plus = sigst.eval(1.0);
    inv.scale_sigma = sigst.core.sup_norm(-1.0, 1.0) + tol.abs;

    inv.real_data = t.f.max_imag_coeff() == 0.0 && t.g.max_imag_coeff() == 0.0;

    // q-weighted functionals
    const PiecewisePoly& wq = t.q.pw();
    inv.a1 = (wq * inv.omega.core).integral(-1.0, 1.0);
    inv.a2 = (wq * (inv.omega.core.conjugated() * inv.omega.core)).integral(-1.0, 1.0).real();
    inv.sigma_star = (wq * (sigma.core.conjugated() * sigma.core)).integral(-1.0, 1.0).real();
    inv.sigma_state_star =
        (wq * (sigst.core.conjugated() * sigst.core)).integral(-1.0, 1.0).real();
    inv.scale_a1 = inv.q_l1 * inv.omega_sup + 1e-6;
    inv.scale_a2 = inv.q_l1 * inv.omega_sup * inv.omega_sup + 1e-6;

    auto near_boundary = [&](const char* name, Cplx x, double scale) {
        double m = tol.margin(x, scale);
        if (m > 0.1 && m <= 10.0)
            inv.warnings.push_back(std::string(name) + " lies within 10x of its zero threshold");
    };
    near_boundary("lambda", inv.lambda_val, inv.scale_lambda);
    near_boundary("pi", inv.pi_val, inv.scale_pi);
    near_boundary("f0", inv.f0, inv.scale_mean_f);
    near_boundary("g0", inv.g0, inv.scale_mean_g);

    return inv;
}

HalfBoundStateReport half_bound_states(const Triple& t, const Tolerances& tol) {
    InvariantSet inv = compute_invariants(t, tol);
    HalfBoundStateReport rep;
    bool lambda_zero = tol.is_zero(inv.lambda_val, inv.scale_lambda);
    if (!lambda_zero) {
        rep.kind = ResonanceKind::None;
        return rep;
    }
    if (inv.zero_mean) {
        if (tol.is_zero(inv.pi_val, inv.scale_pi)) {
            rep.kind = ResonanceKind::Double;
            rep.states.push_back(TailedProfile::constant(Cplx{1.0, 0.0}));
            rep.states.push_back(inv.omega);
        } else {
            rep.kind = ResonanceKind::ConstOnly;
            rep.states.push_back(TailedProfile::constant(Cplx{1.0, 0.0}));
        }
    } else {
        rep.kind = ResonanceKind::Sigma;
        rep.states.push_back(inv.sigma_state);
    }
    for (const auto& u : rep.states) rep.residual = std::max(rep.residual, neumann_residual(t, u));
    return rep;
}

double neumann_residual(const Triple& t, const TailedProfile& u) {
    PiecewisePoly upp = u.core.derivative().derivative();
    Cplx gu = inner(t.g, u);
    Cplx fu = inner(t.f, u);
    PiecewisePoly r = (Cplx{-1.0, 0.0} * upp + gu * t.f.pw()) + fu * t.g.pw();
    return l2norm_I(r);
}

LemmaMatrix lemma_matrix(const Triple& t) {
    if (t.trivial_pair()) throw LinearDependence("lemma matrix needs a nontrivial pair");
    TailedProfile f2a = antiderivative(t.f, 2);
    TailedProfile g2a = antiderivative(t.g, 2);
    Cplx f0 = moment(t.f, 0), g0 = moment(t.g, 0);
    LemmaMatrix m;
    m.a << inner(t.f, f2a), inner(t.f, g2a) - 1.0, std::conj(f0),
           inner(t.g, f2a) - 1.0, inner(t.g, g2a), std::conj(g0),
           f0, g0, Cplx{0.0, 0.0};
    m.det = m.a.determinant();
    return m;
}

std::optional<double> tune_resonance(const Profile& f, const Profile& g) {
    Cplx f0 = moment(f, 0), g0 = moment(g, 0);
    TailedProfile f1a = antiderivative(f, 1);
    TailedProfile g1a = antiderivative(g, 1);
    TailedProfile resfun = combine_tails(g0, f1a, -f0, g1a);
    double n2 = inner(resfun, resfun).real();
    double lin = 2.0 * (f0 * std::conj(g0)).real();
    double scale_n2 = std::pow(std::abs(g0) * l2norm(f1a) + std::abs(f0) * l2norm(g1a), 2) + 1e-300;
    double scale_lin = 2.0 * std::abs(f0) * std::abs(g0) + 1e-300;
    if (n2 <= 1e-12 * scale_n2) return std::nullopt;
    if (std::abs(lin) <= 1e-12 * scale_lin || lin == 0.0) return std::nullopt;
    return lin / n2;
}

}  // namespace pointlim
