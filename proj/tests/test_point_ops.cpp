#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "pointlim/fixtures.hpp"
#include "pointlim/point_ops.hpp"

using namespace pointlim;

namespace {

LimitInteraction random_connected(std::mt19937& rng) {
    std::uniform_real_distribution<double> U(-1.5, 1.5);
    // real matrix with unit determinant via an LU-style parametrization
    double a = std::exp(U(rng)), b = U(rng), c = U(rng);
    Eigen::Matrix2d lower, upper;
    lower << 1.0, 0.0, c, 1.0;
    upper << a, b, 0.0, 1.0 / a;
    return LimitInteraction::connected(CaseTag::A1, U(rng), lower * upper);
}

LimitInteraction random_separated(std::mt19937& rng) {
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    auto bc = [&] {
        return (U(rng) > 0.0) ? BoundaryCondition::dirichlet() : BoundaryCondition::robin(U(rng));
    };
    return LimitInteraction::separated(CaseTag::B2, bc(), bc());
}

}  // namespace

TEST_CASE("closed forms agree with the brute-force matching solve") {
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> K(0.1, 4.0);
    for (int it = 0; it < 100; ++it) {
        LimitInteraction li = (it % 4 == 3) ? random_separated(rng) : random_connected(rng);
        double k = K(rng);
        ScatteringData a = scattering_limit(li, k);
        ScatteringData b = scattering_limit_matching(li, k);
        CHECK(std::abs(a.t - b.t) <= 1e-12 * (1.0 + std::abs(a.t)));
        CHECK(std::abs(a.r_left - b.r_left) <= 1e-12);
        CHECK(std::abs(a.r_right - b.r_right) <= 1e-12);
    }
}

TEST_CASE("reference interactions") {
    // delta of strength a0: t = 2ik/(2ik - a0)
    double a0 = 2.0, k = 1.0;
    ScatteringData s = scattering_limit(delta_limit(a0), k);
    Cplx ik{0.0, k};
    CHECK(std::abs(s.t - 2.0 * ik / (2.0 * ik - a0)) < 1e-14);

    // delta': matrix ((1, beta), (0, 1)) gives t = 2/(2 - beta i k)
    Eigen::Matrix2d dp;
    double beta = 0.7;
    dp << 1.0, beta, 0.0, 1.0;
    ScatteringData sp = scattering_limit(LimitInteraction::connected(CaseTag::A1, 0.0, dp), k);
    CHECK(std::abs(sp.t - 2.0 / (2.0 - beta * ik)) < 1e-14);

    // separated Dirichlet-Dirichlet: no transmission, full reflection
    ScatteringData sd = scattering_limit(
        LimitInteraction::separated(CaseTag::B3, BoundaryCondition::dirichlet(),
                                    BoundaryCondition::dirichlet()),
        k);
    CHECK(sd.t == Cplx{0.0, 0.0});
    CHECK(std::abs(sd.r_left + 1.0) < 1e-15);
    CHECK(std::abs(sd.r_right + 1.0) < 1e-15);

    // Robin reflection: r = (ik - theta)/(ik + theta); Neumann reflects +1
    ScatteringData sr = scattering_limit(
        LimitInteraction::separated(CaseTag::B1, BoundaryCondition::robin(0.0),
                                    BoundaryCondition::robin(2.0)),
        k);
    CHECK(std::abs(sr.r_left - 1.0) < 1e-15);
    CHECK(std::abs(sr.r_right - (ik + 2.0) / (ik - 2.0)) < 1e-15);
}

TEST_CASE("unitarity of the closed forms") {
    std::mt19937 rng(12);
    std::uniform_real_distribution<double> K(0.05, 5.0);
    for (int it = 0; it < 200; ++it) {
        LimitInteraction li = (it % 3 == 0) ? random_separated(rng) : random_connected(rng);
        ScatteringData s = scattering_limit(li, K(rng));
        CHECK(std::abs(std::norm(s.t) + std::norm(s.r_left) - 1.0) <= 1e-12);
        CHECK(std::abs(std::norm(s.t) + std::norm(s.r_right) - 1.0) <= 1e-12);
    }
}

TEST_CASE("sign-folded representations scatter identically") {
    std::mt19937 rng(14);
    for (int it = 0; it < 50; ++it) {
        LimitInteraction li = random_connected(rng);
        LimitInteraction twin = LimitInteraction::connected(
            li.tag, wrap_phase(li.phase + M_PI), -li.coupling);
        for (double k : {0.3, 1.0, 2.7}) {
            ScatteringData a = scattering_limit(li, k);
            ScatteringData b = scattering_limit(twin, k);
            CHECK(std::abs(a.t - b.t) <= 1e-13);
            CHECK(std::abs(a.r_left - b.r_left) <= 1e-13);
            CHECK(std::abs(a.r_right - b.r_right) <= 1e-13);
        }
    }
}

TEST_CASE("transfer matrix of the limit") {
    LimitInteraction id = delta_limit(0.0);
    TransferMatrix m = transfer_matrix_limit(id, 1.0);
    CHECK(m.m.isApprox(Eigen::Matrix2cd::Identity(), 1e-15));
    CHECK(m.ref_left == 0.0);

    LimitInteraction a2 = classify(make_fixture("a2_fixture").triple);
    TransferMatrix ma = transfer_matrix_limit(a2, 1.0);
    // phase pi with diag(2/3, 3/2): the boundary-data map is -diag(2/3, 3/2)
    CHECK(std::abs(ma.m(0, 0) + 2.0 / 3.0) < 1e-10);
    CHECK(std::abs(ma.m(1, 1) + 1.5) < 1e-10);
    CHECK(std::abs(ma.m.determinant() - 1.0) < 1e-10);

    CHECK_THROWS_AS(transfer_matrix_limit(
                        LimitInteraction::separated(CaseTag::B3, BoundaryCondition::dirichlet(),
                                                    BoundaryCondition::dirichlet()),
                        1.0),
                    SeparatedHasNoTransfer);
}

TEST_CASE("limit resolvent: identity interaction is the free kernel") {
    Cplx zeta{0.0, 1.0};
    Cplx mu = sqrt_upper(zeta);
    PiecewisePoly h({0.0, 1.0}, {Polynomial::constant(1.0)});
    Trajectory y = resolvent_apply_limit(delta_limit(0.0), zeta, h);
    for (double x : {-1.0, 0.4, 2.0}) {
        auto kern = [&](double s) {
            return Cplx{0.0, 1.0} * std::exp(Cplx{0.0, 1.0} * mu * std::abs(x - s)) / (2.0 * mu);
        };
        Cplx expect = (x > 0.0 && x < 1.0)
                          ? oracle::integrate(kern, 0.0, x, 64) + oracle::integrate(kern, x, 1.0, 64)
                          : oracle::integrate(kern, 0.0, 1.0, 128);
        CHECK(std::abs(y.eval(x) - expect) < 1e-13);
    }
}

TEST_CASE("limit resolvent: Dirichlet walls decouple the half-lines") {
    Cplx zeta{1.0, 1.0};
    PiecewisePoly h({0.5, 1.5}, {Polynomial::constant(1.0)});
    Trajectory y = resolvent_apply_limit(
        LimitInteraction::separated(CaseTag::B3, BoundaryCondition::dirichlet(),
                                    BoundaryCondition::dirichlet()),
        zeta, h);
    for (double x : {-3.0, -1.0, -0.01}) CHECK(std::abs(y.eval(x)) <= 1e-12);
    CHECK(std::abs(y.eval(0.8)) > 1e-3);
    CHECK(std::abs(y.eval(0.0001)) < 1e-3);  // Dirichlet at the origin
}

TEST_CASE("limit resolvent: delta interaction matches the rank-one kernel") {
    double a0 = 2.0;
    Cplx zeta{0.0, 1.0};
    Cplx mu = sqrt_upper(zeta);
    PiecewisePoly h({0.0, 1.0}, {Polynomial::constant(1.0)});
    Trajectory y = resolvent_apply_limit(delta_limit(a0), zeta, h);
    auto G0 = [&](double a, double b) {
        return Cplx{0.0, 1.0} * std::exp(Cplx{0.0, 1.0} * mu * std::abs(a - b)) / (2.0 * mu);
    };
    // G(x, s) = G0(x - s) - a0 G0(x) G0(s) / (1 + a0 G0(0))
    Cplx denom = 1.0 + a0 * G0(0.0, 0.0);
    for (double x : {-1.7, -0.2, 0.6, 2.4}) {
        auto kern = [&](double s) { return G0(x, s) - a0 * G0(x, 0.0) * G0(0.0, s) / denom; };
        Cplx expect = (x > 0.0 && x < 1.0)
                          ? oracle::integrate(kern, 0.0, x, 64) + oracle::integrate(kern, x, 1.0, 64)
                          : oracle::integrate(kern, 0.0, 1.0, 128);
        CHECK(std::abs(y.eval(x) - expect) < 1e-12);
    }
}

TEST_CASE("limit resolvent residual") {
    LimitInteraction a2 = classify(make_fixture("a2_fixture").triple);
    Cplx zeta{0.0, 1.0};
    PiecewisePoly h({1.0, 2.0}, {Polynomial::constant(1.0)});
    Trajectory y = resolvent_apply_limit(a2, zeta, h);
    // interface condition at the origin
    Cplx ph = std::exp(Cplx{0.0, a2.phase});
    Cplx lhs0 = y.eval(1e-13), lhs1 = y.deriv(1e-13);
    Cplx rhs0 = ph * (a2.coupling(0, 0) * y.eval(-1e-13) + a2.coupling(0, 1) * y.deriv(-1e-13));
    Cplx rhs1 = ph * (a2.coupling(1, 0) * y.eval(-1e-13) + a2.coupling(1, 1) * y.deriv(-1e-13));
    CHECK(std::abs(lhs0 - rhs0) <= 1e-9 * (1.0 + std::abs(lhs0)));
    CHECK(std::abs(lhs1 - rhs1) <= 1e-9 * (1.0 + std::abs(lhs1)));
    // equation residual by finite differences away from the interface
    for (double x : {-2.0, 0.5, 1.5, 3.0}) {
        double d = 1e-4;
        Cplx ypp = (y.eval(x + d) - 2.0 * y.eval(x) + y.eval(x - d)) / (d * d);
        Cplx hval = (x > 1.0 && x < 2.0) ? Cplx{1.0, 0.0} : Cplx{0.0, 0.0};
        CHECK(std::abs(-ypp - zeta * y.eval(x) - hval) < 1e-4);
    }
}
