#include "pointlim/classifier.hpp"

#include <cmath>

namespace pointlim {

const char* to_string(CaseTag tag) {
    switch (tag) {
        case CaseTag::A1: return "A1";
        case CaseTag::A2: return "A2";
        case CaseTag::A3: return "A3";
        case CaseTag::B1: return "B1";
        case CaseTag::B2: return "B2";
        case CaseTag::B3: return "B3";
    }
    return "?";
}

double wrap_phase(double phi) {
    const double pi = M_PI;
    while (phi <= -pi) phi += 2.0 * pi;
    while (phi > pi) phi -= 2.0 * pi;
    return phi;
}

LimitInteraction LimitInteraction::connected(CaseTag tag, double phase, const Eigen::Matrix2d& c) {
    LimitInteraction li;
    li.kind = Connected;
    li.tag = tag;
    li.phase = wrap_phase(phase);
    li.coupling = c;
    return li;
}

LimitInteraction LimitInteraction::separated(CaseTag tag, BoundaryCondition l, BoundaryCondition r) {
    LimitInteraction li;
    li.kind = Separated;
    li.tag = tag;
    li.left = l;
    li.right = r;
    return li;
}

std::pair<double, Eigen::Matrix2d> matrix_A1(const InvariantSet& inv) {
    Cplx kappa = inv.kappa;
    Cplx a1 = inv.a1;
    double a0 = inv.a0, a2 = inv.a2;
    Cplx den_c = a2 - std::conj(kappa) * a1;
    double den = std::abs(den_c);
    double scale = std::abs(a2) + std::abs(kappa) * std::abs(a1) + 1e-300;
    if (den <= 1e-14 * scale)
        throw DegenerateDenominator("a2 - conj(kappa) a1 vanishes; case A1 does not apply");
    double k2 = std::norm(kappa);
    double re_ka1 = (std::conj(kappa) * a1).real();
    Eigen::Matrix2d m;
    m << (k2 * a0 - 2.0 * re_ka1 + a2) / den, k2 / den,
         (a0 * a2 - std::norm(a1)) / den, a2 / den;
    double phase = std::arg(a2 - kappa * std::conj(a1));
    double det = m.determinant();
    if (std::abs(det - 1.0) > 1e-10)
        throw Error("A1 coupling matrix determinant deviates from 1");
    return {wrap_phase(phase), m};
}

std::pair<double, Eigen::Matrix2d> matrix_A2(const InvariantSet& inv) {
    Cplx sp = inv.sigma_state_plus, sm = inv.sigma_state_minus;
    if (inv.real_data && std::abs(sp.imag()) > 1e-10 * (1.0 + std::abs(sp)))
        throw NonRealSigmaPlus("sigma(1) not real for a real triple; quadrature inconsistency");
    // normalization-invariant form of the coupling built on the half-bound
    // state: phase arg s+ - arg s-, real matrix from the moduli.  For real
    // sigma(1) > 0 this is the textbook ((s+/|s-|, 0), (s*/(s+|s-|), |s-|/s+)).
    double phase = std::arg(sp) - std::arg(sm);
    Eigen::Matrix2d m;
    m << std::abs(sp) / std::abs(sm), 0.0,
         inv.sigma_state_star / (std::abs(sp) * std::abs(sm)), std::abs(sm) / std::abs(sp);
    return {wrap_phase(phase), m};
}

std::pair<BoundaryCondition, BoundaryCondition> separated_B1(const InvariantSet& inv) {
    double k2 = std::norm(inv.kappa);
    double theta2 = inv.a2 / k2;
    double theta1 = theta2 - inv.a0;
    return {BoundaryCondition::robin(theta1), BoundaryCondition::robin(theta2)};
}

std::pair<BoundaryCondition, BoundaryCondition> separated_B2(const InvariantSet& inv,
                                                             const Tolerances& tol) {
    bool minus_zero = tol.is_zero(inv.sigma_state_minus, inv.scale_sigma);
    if (minus_zero) {
        double theta_plus = inv.sigma_state_star / std::norm(inv.sigma_state_plus);
        return {BoundaryCondition::dirichlet(), BoundaryCondition::robin(theta_plus)};
    }
    double theta_minus = -inv.sigma_state_star / std::norm(inv.sigma_state_minus);
    return {BoundaryCondition::robin(theta_minus), BoundaryCondition::dirichlet()};
}

LimitInteraction classify(const Triple& t, const Tolerances& tol, bool strict) {
    return classify(compute_invariants(t, tol), tol, strict);
}

LimitInteraction delta_limit(double a0) {
    Eigen::Matrix2d m;
    m << 1.0, 0.0, a0, 1.0;
    return LimitInteraction::connected(CaseTag::A3, 0.0, m);
}

LimitInteraction classify(const InvariantSet& inv, const Tolerances& tol, bool strict) {
    std::map<std::string, double> margins;
    auto test_zero = [&](const char* name, Cplx x, double scale) {
        margins[name] = tol.margin(x, scale);
        return tol.is_zero(x, scale);
    };

    LimitInteraction out;
    bool lambda_zero = test_zero("lambda", inv.lambda_val, inv.scale_lambda);
    if (!lambda_zero) {
        out = LimitInteraction::separated(CaseTag::B3, BoundaryCondition::dirichlet(),
                                          BoundaryCondition::dirichlet());
    } else {
        bool f0_zero = test_zero("f0", inv.f0, inv.scale_mean_f);
        bool g0_zero = test_zero("g0", inv.g0, inv.scale_mean_g);
        if (f0_zero != g0_zero)
            throw ImpossibleBranch(
                "lambda = 0 with exactly one vanishing mean contradicts linear independence");
        if (!f0_zero) {
            // sigma resonance branch (endpoint data of the actual kernel element)
            bool sm_zero = test_zero("sigma_minus", inv.sigma_state_minus, inv.scale_sigma);
            bool sp_zero = test_zero("sigma_plus", inv.sigma_state_plus, inv.scale_sigma);
            if (!sm_zero && !sp_zero) {
                auto [phase, m] = matrix_A2(inv);
                out = LimitInteraction::connected(CaseTag::A2, phase, m);
            } else {
                Cplx mix = inv.f0 * inv.g1 - inv.f1 * inv.g0;
                double mix_scale =
                    std::abs(inv.f0 * inv.g1) + std::abs(inv.f1 * inv.g0) + 1.0;
                if (!test_zero("f0g1-f1g0", mix, mix_scale)) {
                    auto [l, r] = separated_B2(inv, tol);
                    out = LimitInteraction::separated(CaseTag::B2, l, r);
                } else {
                    out = LimitInteraction::separated(CaseTag::B3, BoundaryCondition::dirichlet(),
                                                      BoundaryCondition::dirichlet());
                }
            }
        } else {
            // zero-mean branch
            if (!test_zero("pi", inv.pi_val, inv.scale_pi)) {
                Eigen::Matrix2d m;
                m << 1.0, 0.0, inv.a0, 1.0;
                out = LimitInteraction::connected(CaseTag::A3, 0.0, m);
            } else {
                Cplx gap = inv.a2 - std::conj(inv.kappa) * inv.a1;
                double gap_scale = std::abs(inv.a2) + std::abs(inv.kappa) * std::abs(inv.a1) +
                                   inv.q_l1 * (1.0 + inv.omega_sup) * (1.0 + inv.omega_sup);
                if (!test_zero("a2-conj(kappa)a1", gap, gap_scale)) {
                    auto [phase, m] = matrix_A1(inv);
                    out = LimitInteraction::connected(CaseTag::A1, phase, m);
                } else if (!test_zero("kappa", inv.kappa, inv.scale_kappa)) {
                    auto [l, r] = separated_B1(inv);
                    out = LimitInteraction::separated(CaseTag::B1, l, r);
                } else if (!test_zero("a1", inv.a1, inv.scale_a1)) {
                    out = LimitInteraction::separated(CaseTag::B3, BoundaryCondition::dirichlet(),
                                                      BoundaryCondition::dirichlet());
                } else {
                    Eigen::Matrix2d m;
                    m << 1.0, 0.0, inv.a0, 1.0;
                    out = LimitInteraction::connected(CaseTag::A3, 0.0, m);
                }
            }
        }
    }

    out.margins = margins;
    for (const auto& [name, m] : margins)
        if (m > 0.1 && m <= 10.0) out.unstable = true;
    if (out.unstable && strict)
        throw UnstableClassification("a branch quantity lies within 10x of its zero threshold");
    return out;
}

LimitInteraction canonical(const LimitInteraction& li) {
    if (li.kind != LimitInteraction::Connected) return li;
    LimitInteraction out = li;
    double first = 0.0;
    for (double v : {out.coupling(0, 0), out.coupling(0, 1), out.coupling(1, 0), out.coupling(1, 1)}) {
        if (v != 0.0) {
            first = v;
            break;
        }
    }
    if (first < 0.0) {
        out.coupling = -out.coupling;
        out.phase = wrap_phase(out.phase + M_PI);
    }
    out.phase = wrap_phase(out.phase);
    return out;
}

}  // namespace pointlim
