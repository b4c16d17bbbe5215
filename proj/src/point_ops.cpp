#include "pointlim/point_ops.hpp"

#include <cmath>

namespace pointlim {

namespace {

Cplx reflection_left(const BoundaryCondition& bc, double k) {
    Cplx ik{0.0, k};
    if (bc.kind == BoundaryCondition::Dirichlet) return {-1.0, 0.0};
    return (ik - bc.theta) / (ik + bc.theta);
}

Cplx reflection_right(const BoundaryCondition& bc, double k) {
    Cplx ik{0.0, k};
    if (bc.kind == BoundaryCondition::Dirichlet) return {-1.0, 0.0};
    return (ik + bc.theta) / (ik - bc.theta);
}

}  // namespace

ScatteringData scattering_limit(const LimitInteraction& li, double k) {
    if (k <= 0.0) throw Error("k must be positive");
    ScatteringData s;
    s.k = k;
    if (li.kind == LimitInteraction::Separated) {
        s.t = {0.0, 0.0};
        s.r_left = reflection_left(li.left, k);
        s.r_right = reflection_right(li.right, k);
        return s;
    }
    const Eigen::Matrix2d& c = li.coupling;
    Cplx ik{0.0, k};
    Cplx D = ik * (c(0, 0) + c(1, 1)) + k * k * c(0, 1) - c(1, 0);
    Cplx ph = std::exp(Cplx{0.0, li.phase});
    s.t = 2.0 * ik * ph / D;
    s.r_left = -(ik * (c(0, 0) - c(1, 1)) - k * k * c(0, 1) - c(1, 0)) / D;
    s.r_right = (ik * (c(0, 0) - c(1, 1)) + k * k * c(0, 1) + c(1, 0)) / D;
    return s;
}

MatchingSystem matching_system(const LimitInteraction& li, double k) {
    if (li.kind != LimitInteraction::Connected)
        throw Error("the matching system is defined for connected interactions");
    MatchingSystem ms;
    ms.interaction = li;
    ms.k = k;
    Eigen::Matrix2cd m = li.coupling.cast<Cplx>() * std::exp(Cplx{0.0, li.phase});
    Cplx ik{0.0, k};
    // unknowns (t, r): (t, ik t) = m (1 + r, ik(1 - r))
    ms.lhs.col(0) = Eigen::Vector2cd(1.0, ik);
    ms.lhs.col(1) = -(m * Eigen::Vector2cd(1.0, -ik));
    ms.rhs = m * Eigen::Vector2cd(1.0, ik);
    return ms;
}

ScatteringData scattering_limit_matching(const LimitInteraction& li, double k) {
    if (li.kind == LimitInteraction::Separated) return scattering_limit(li, k);
    Eigen::Matrix2cd m = li.coupling.cast<Cplx>() * std::exp(Cplx{0.0, li.phase});
    Cplx ik{0.0, k};
    ScatteringData s;
    s.k = k;
    {
        MatchingSystem ms = matching_system(li, k);
        Eigen::Vector2cd x = ms.lhs.fullPivLu().solve(ms.rhs);
        s.t = x(0);
        s.r_left = x(1);
    }
    {
        // right incidence: (1 + rr, -ik(1 - rr)) = m (t', -ik t')
        Eigen::Matrix2cd a;
        a.col(0) = m * Eigen::Vector2cd(1.0, -ik);
        a.col(1) = Eigen::Vector2cd(-1.0, -ik);
        Eigen::Vector2cd b(1.0, -ik);
        Eigen::Vector2cd x = a.fullPivLu().solve(b);
        s.r_right = x(1);
    }
    return s;
}

TransferMatrix transfer_matrix_limit(const LimitInteraction& li, double k) {
    if (li.kind != LimitInteraction::Connected)
        throw SeparatedHasNoTransfer("separated conditions define no boundary-data map");
    TransferMatrix m;
    m.m = li.coupling.cast<Cplx>() * std::exp(Cplx{0.0, li.phase});
    m.ref_left = 0.0;
    m.ref_right = 0.0;
    m.spectral = Cplx{k * k, 0.0};
    return m;
}

Trajectory resolvent_apply_limit(const LimitInteraction& li, Cplx zeta, const PiecewisePoly& h) {
    if (zeta.imag() == 0.0) throw Error("resolvent requires Im zeta != 0");
    Cplx mu = sqrt_upper(zeta);
    Cplx iu = Cplx{0.0, 1.0} * mu;
    double L = resolvent_truncation_length(zeta, h);

    std::vector<ExpSegment> segs_left, segs_right;
    Cplx p0{0.0, 0.0}, p1{0.0, 0.0};
    propagate_exterior(segs_left, h, mu, -L, 0.0, true, p0, p1);
    Cplx q0{0.0, 0.0}, q1{0.0, 0.0};
    propagate_exterior(segs_right, h, mu, 0.0, L, false, q0, q1);

    // left solution alpha e^{-i mu x} + particular, right beta e^{i mu x} + particular
    Cplx alpha, beta;
    if (li.kind == LimitInteraction::Connected) {
        Eigen::Matrix2cd c = li.coupling.cast<Cplx>() * std::exp(Cplx{0.0, li.phase});
        // (beta + q0, i mu beta + q1) = C (alpha + p0, -i mu alpha + p1)
        Eigen::Matrix2cd a;
        a(0, 0) = c(0, 0) - iu * c(0, 1);
        a(0, 1) = Cplx{-1.0, 0.0};
        a(1, 0) = c(1, 0) - iu * c(1, 1);
        a(1, 1) = -iu;
        Eigen::Vector2cd b(q0 - (c(0, 0) * p0 + c(0, 1) * p1),
                           q1 - (c(1, 0) * p0 + c(1, 1) * p1));
        Eigen::Vector2cd x = a.fullPivLu().solve(b);
        alpha = x(0);
        beta = x(1);
    } else {
        if (li.left.kind == BoundaryCondition::Dirichlet) {
            alpha = -p0;
        } else {
            // (-i mu - theta) alpha = theta p0 - p1
            alpha = (li.left.theta * p0 - p1) / (-iu - li.left.theta);
        }
        if (li.right.kind == BoundaryCondition::Dirichlet) {
            beta = -q0;
        } else {
            beta = (li.right.theta * q0 - q1) / (iu - li.right.theta);
        }
    }

    for (auto& s : segs_left) s.cm += alpha * std::exp(-iu * s.x0);
    for (auto& s : segs_right) s.cp += beta * std::exp(iu * s.x0);
    std::vector<ExpSegment> segs;
    segs.reserve(segs_left.size() + segs_right.size());
    segs.insert(segs.end(), segs_left.begin(), segs_left.end());
    segs.insert(segs.end(), segs_right.begin(), segs_right.end());
    return Trajectory(std::move(segs), std::nullopt, L);
}

}  // namespace pointlim
