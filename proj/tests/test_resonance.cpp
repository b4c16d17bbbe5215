#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "pointlim/resonance.hpp"

using namespace pointlim;

namespace {

Profile real_poly(std::initializer_list<double> coeffs) {
    std::vector<Cplx> c;
    for (double v : coeffs) c.emplace_back(v, 0.0);
    return Profile::poly(std::move(c));
}

Profile random_profile(std::mt19937& rng, int degree, bool complex_coeffs = true) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::vector<Cplx> c(size_t(degree) + 1);
    for (auto& v : c) v = complex_coeffs ? Cplx{U(rng), U(rng)} : Cplx{U(rng), 0.0};
    return Profile::poly(std::move(c));
}

Triple random_triple(std::mt19937& rng, int degree = 6) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::vector<Cplx> qc(4);
    for (auto& v : qc) v = Cplx{U(rng), 0.0};
    return Triple(random_profile(rng, degree), random_profile(rng, degree),
                  Profile::poly(std::move(qc)));
}

// a zero-mean pair built from two orthonormalized antiderivatives: the
// double-resonance construction (pi = 0 by design)
Triple random_double_resonant(std::mt19937& rng, bool complex_coeffs) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    auto vanish = [&] {
        std::vector<Cplx> w(4);
        for (auto& v : w) v = complex_coeffs ? Cplx{U(rng), U(rng)} : Cplx{U(rng), 0.0};
        return Polynomial({{1.0, 0.0}, {0.0, 0.0}, {-1.0, 0.0}}) * Polynomial(w);
    };
    Polynomial W = vanish(), V = vanish();
    Profile Fw(PiecewisePoly({-1.0, 1.0}, {W}));
    W *= Cplx{1.0 / l2norm(Fw), 0.0};
    Fw = Profile(PiecewisePoly({-1.0, 1.0}, {W}));
    Polynomial Vo = V - inner(Fw, Profile(PiecewisePoly({-1.0, 1.0}, {V}))) * W;
    Profile Gv(PiecewisePoly({-1.0, 1.0}, {Vo}));
    Vo *= Cplx{1.0 / l2norm(Gv), 0.0};
    std::vector<Cplx> qc(3);
    for (auto& v : qc) v = Cplx{U(rng), 0.0};
    return Triple(Profile(PiecewisePoly({-1.0, 1.0}, {W.derivative()})),
                  Profile(PiecewisePoly({-1.0, 1.0}, {Vo.derivative()})),
                  Profile::poly(std::move(qc)));
}

}  // namespace

TEST_CASE("triple validation") {
    Profile f = Profile::bump_even();
    CHECK_THROWS_AS(Triple(f, 2.0 * f, Profile::constant(0.0)), LinearDependence);
    CHECK_THROWS_AS(Triple(f, Profile::bump_odd(), Profile::constant(Cplx{0.0, 1.0})),
                    InvalidProfile);
    // the fully trivial pair is admitted for the bare-delta solvers ...
    CHECK_NOTHROW(Triple(Profile(), Profile(), Profile::constant(1.0)));
    // ... but the resonance machinery rejects it
    Triple trivial(Profile(), Profile(), Profile::constant(1.0));
    CHECK_THROWS_AS(compute_invariants(trivial), LinearDependence);
}

TEST_CASE("invariants of the double-resonance pair") {
    // f = F', g = G' for the orthonormal bumps: kappa = sqrt(15)/3
    Profile f = real_poly({0.0, -std::sqrt(15.0) / 2.0});
    Profile g = real_poly({std::sqrt(105.0) / 4.0, 0.0, -3.0 * std::sqrt(105.0) / 4.0});
    Triple t(f, g, Profile::constant(0.0));
    InvariantSet inv = compute_invariants(t);
    CHECK(std::abs(inv.f0) < 1e-14);
    CHECK(std::abs(inv.g0) < 1e-14);
    CHECK(std::abs(inv.pi_val) < 1e-14);
    CHECK(std::abs(inv.theta_phase) < 1e-14);
    CHECK(std::abs(inv.f1 - Cplx{-std::sqrt(15.0) / 3.0, 0.0}) < 1e-14);
    CHECK(std::abs(inv.g1) < 1e-14);
    CHECK(std::abs(inv.kappa - std::sqrt(15.0) / 3.0) < 1e-13);
    CHECK(inv.zero_mean);

    // with q = 1: a0 = 2, a1 = sqrt(15)/3 + sqrt(105)/15, a2 = sqrt(7)/3 + 11/7
    Triple tq(f, g, Profile::constant(1.0));
    InvariantSet invq = compute_invariants(tq);
    CHECK(std::abs(invq.a0 - 2.0) < 1e-14);
    CHECK(std::abs(invq.a1 - (std::sqrt(15.0) / 3.0 + std::sqrt(105.0) / 15.0)) < 1e-13);
    CHECK(std::abs(invq.a2 - (std::sqrt(7.0) / 3.0 + 11.0 / 7.0)) < 1e-13);
    // quadrature oracle for a2 = ∫ |omega|^2
    double a2_oracle = oracle::integrate_real(
        [&](double x) { return std::norm(invq.omega.eval(x)); }, -1.0, 1.0);
    CHECK(std::abs(invq.a2 - a2_oracle) < 1e-12);
}

TEST_CASE("lambda for a nonresonant pair") {
    Triple t(Profile::constant(0.5), real_poly({0.0, 1.0}), Profile::constant(0.0));
    InvariantSet inv = compute_invariants(t);
    CHECK(std::abs(inv.lambda_val - 4.0 / 15.0) < 1e-14);
}

TEST_CASE("sigma for the resonant nonzero-mean pair") {
    // f = 1, g = (15/2)(1+x): lambda = 0; the closed-form sigma has the
    // documented endpoint values, the kernel element has the corrected ones.
    Triple t(Profile::constant(1.0), real_poly({7.5, 7.5}), Profile::constant(0.0));
    InvariantSet inv = compute_invariants(t);
    CHECK(std::abs(inv.lambda_val) < 1e-12);
    CHECK(std::abs(inv.sigma_minus - Cplx{-60.0, 0.0}) < 1e-11);
    CHECK(std::abs(inv.sigma_plus - Cplx{240.0, 0.0}) < 1e-11);
    CHECK(std::abs(inv.sigma_star) < 1e-11);
    // sigma(x) = -75 (x+1)^3 + 225 (x+1)^2 - 60
    for (double x : {-0.8, -0.2, 0.4, 0.9}) {
        double expect = -75.0 * std::pow(x + 1.0, 3) + 225.0 * std::pow(x + 1.0, 2) - 60.0;
        CHECK(std::abs(inv.sigma.eval(x) - expect) < 1e-10);
    }
    // kernel element: 30 * (15 f^(-2) - 2 g^(-2) - 6); endpoints -180, 120
    CHECK(std::abs(inv.sigma_state_minus - Cplx{-180.0, 0.0}) < 1e-10);
    CHECK(std::abs(inv.sigma_state_plus - Cplx{120.0, 0.0}) < 1e-10);
}

TEST_CASE("half-bound state kinds") {
    // pi != 0: only constants
    Triple consts(real_poly({0.0, 1.0}), real_poly({1.0, 0.0, -3.0}), Profile::constant(1.0));
    HalfBoundStateReport rc = half_bound_states(consts);
    CHECK(rc.kind == ResonanceKind::ConstOnly);
    REQUIRE(rc.states.size() == 1);
    CHECK(rc.residual <= 1e-8 * (1.0 + l2norm(rc.states[0])));
    InvariantSet ic = compute_invariants(consts);
    CHECK(std::abs(ic.pi_val - (std::sqrt(64.0 / 1575.0) - 1.0)) < 1e-12);

    // double resonance: states {1, omega}
    Profile f = real_poly({0.0, -std::sqrt(15.0) / 2.0});
    Profile g = real_poly({std::sqrt(105.0) / 4.0, 0.0, -3.0 * std::sqrt(105.0) / 4.0});
    Triple dbl(f, g, Profile::constant(0.0));
    HalfBoundStateReport rd = half_bound_states(dbl);
    CHECK(rd.kind == ResonanceKind::Double);
    REQUIRE(rd.states.size() == 2);
    CHECK(std::abs(rd.states[0].eval(0.3) - 1.0) < 1e-14);
    CHECK(rd.residual <= 1e-8);

    // lambda != 0: none
    Triple none(Profile::constant(0.5), real_poly({0.0, 1.0}), Profile::constant(0.0));
    CHECK(half_bound_states(none).kind == ResonanceKind::None);

    // sigma resonance: the corrected kernel element is an actual state
    Triple sig(Profile::constant(1.0), real_poly({7.5, 7.5}), Profile::constant(0.0));
    HalfBoundStateReport rs = half_bound_states(sig);
    CHECK(rs.kind == ResonanceKind::Sigma);
    REQUIRE(rs.states.size() == 1);
    CHECK(rs.residual <= 1e-8 * (1.0 + l2norm(rs.states[0])));
}

TEST_CASE("reported states satisfy the Neumann problem") {
    std::mt19937 rng(21);
    int seen = 0;
    for (int it = 0; it < 40; ++it) {
        Triple t = random_double_resonant(rng, it % 2 == 0);
        HalfBoundStateReport rep = half_bound_states(t);
        REQUIRE(rep.kind == ResonanceKind::Double);
        for (const auto& u : rep.states) {
            double nrm = l2norm(u);
            CHECK(neumann_residual(t, u) <= 1e-8 * (1.0 + nrm));
            CHECK(std::abs(u.eval_deriv(-1.0)) <= 1e-10 * (1.0 + nrm));
            CHECK(std::abs(u.eval_deriv(1.0)) <= 1e-10 * (1.0 + nrm));
            ++seen;
        }
    }
    CHECK(seen == 80);
}

TEST_CASE("det A equals lambda") {
    std::mt19937 rng(33);
    for (int it = 0; it < 300; ++it) {
        Triple t = random_triple(rng);
        LemmaMatrix lm = lemma_matrix(t);
        InvariantSet inv = compute_invariants(t);
        double scale = std::abs(lm.det) + std::abs(inv.lambda_val) + 1.0;
        CHECK(std::abs(lm.det - Cplx{inv.lambda_val, 0.0}) <= 1e-10 * scale);
    }

    // zero-mean pair: third row vanishes identically
    Profile f = real_poly({0.0, -std::sqrt(15.0) / 2.0});
    Profile g = real_poly({std::sqrt(105.0) / 4.0, 0.0, -3.0 * std::sqrt(105.0) / 4.0});
    LemmaMatrix lm = lemma_matrix(Triple(f, g, Profile::constant(0.0)));
    CHECK(std::abs(lm.a(2, 0)) < 1e-14);
    CHECK(std::abs(lm.a(2, 1)) < 1e-14);
    CHECK(std::abs(lm.det) < 1e-12);

    LemmaMatrix lm2 =
        lemma_matrix(Triple(Profile::constant(0.5), real_poly({0.0, 1.0}), Profile()));
    CHECK(std::abs(lm2.det - Cplx{4.0 / 15.0, 0.0}) < 1e-13);
}

TEST_CASE("kappa two-formula agreement") {
    std::mt19937 rng(55);
    for (int it = 0; it < 60; ++it) {
        Triple t = random_double_resonant(rng, true);
        InvariantSet inv = compute_invariants(t);
        TailedProfile f1 = antiderivative(t.f, 1), g1 = antiderivative(t.g, 1);
        Cplx via_moments = l2norm(f1) * inv.g1 -
                           std::exp(Cplx{0.0, inv.theta_phase}) * l2norm(g1) * inv.f1;
        CHECK(std::abs(inv.kappa - via_moments) <= 1e-12 * (1.0 + std::abs(inv.kappa)));
    }
}

TEST_CASE("sigma identities hold for the closed form") {
    std::mt19937 rng(77);
    for (int it = 0; it < 200; ++it) {
        Triple t = random_triple(rng);
        InvariantSet inv = compute_invariants(t);
        CHECK(std::abs(inv.sigma_plus.imag()) <= 1e-10 * (1.0 + std::abs(inv.sigma_plus)));
        Cplx expect = std::conj(inv.f0) * std::conj(inv.g0) * (inv.f0 * inv.g1 - inv.f1 * inv.g0);
        Cplx got = inv.sigma_plus - inv.sigma_minus;
        CHECK(std::abs(got - expect) <= 1e-10 * (1.0 + std::abs(expect)));
        // the kernel element shares the same non-constant part, so the jump
        // identity holds for it as well
        Cplx got_state = inv.sigma_state_plus - inv.sigma_state_minus;
        CHECK(std::abs(got_state - expect) <= 1e-10 * (1.0 + std::abs(expect)));
    }
}

TEST_CASE("a1 real for real double resonance, a2 nonnegative for q >= 0") {
    std::mt19937 rng(99);
    for (int it = 0; it < 40; ++it) {
        Triple t = random_double_resonant(rng, false);
        InvariantSet inv = compute_invariants(t);
        REQUIRE(inv.zero_mean);
        CHECK(std::abs(inv.a1.imag()) <= 1e-12 * (1.0 + std::abs(inv.a1)));
        Triple tq(t.f, t.g, Profile::constant(0.7));
        CHECK(compute_invariants(tq).a2 >= -1e-14);
    }
}

TEST_CASE("tune_resonance") {
    Profile one = Profile::constant(1.0);
    auto t1 = tune_resonance(one, real_poly({1.0, 1.0}));
    REQUIRE(t1.has_value());
    CHECK(std::abs(*t1 - 7.5) < 1e-12);
    CHECK(!tune_resonance(one, real_poly({0.0, 1.0})).has_value());
    CHECK(!tune_resonance(one, Profile::poly({{0.0, 1.0}, {0.0, 1.0}})).has_value());

    // the tuned triple really is resonant
    Triple tuned(one, *t1 * real_poly({1.0, 1.0}), Profile::constant(0.0));
    InvariantSet inv = compute_invariants(tuned);
    CHECK(std::abs(inv.lambda_val) <= 1e-9 * inv.scale_lambda);
}
