#pragma once

#include "pointlim/cell_solver.hpp"
#include "pointlim/classifier.hpp"
#include "pointlim/trajectory.hpp"

namespace pointlim {

/// Closed-form plane-wave scattering of the limit point interaction.
/// Connected (v+, v+') = e^{i phi} C (v-, v-'):
///   D = ik (c11 + c22) + k^2 c12 - c21,
///   t = 2ik e^{i phi} / D,
///   r_left  = -(ik (c11 - c22) - k^2 c12 - c21) / D,
///   r_right =  (ik (c11 - c22) + k^2 c12 + c21) / D.
/// Separated: t = 0, Dirichlet r = -1, Robin(theta) r = (ik - theta)/(ik + theta)
/// on the left and the mirrored form on the right.
ScatteringData scattering_limit(const LimitInteraction& li, double k);

/// The 2x2 plane-wave matching system of a connected interaction: unknowns
/// (t, r), lhs * (t, r) = rhs built from (1 + r, ik(1 - r)) -> (t, ik t).
struct MatchingSystem {
    LimitInteraction interaction;
    double k = 0.0;
    Eigen::Matrix2cd lhs;
    Eigen::Vector2cd rhs;
};

MatchingSystem matching_system(const LimitInteraction& li, double k);

/// Same scattering data from a brute-force numerical solve of the matching
/// system (reference implementation for cross-checks).
ScatteringData scattering_limit_matching(const LimitInteraction& li, double k);

/// m = e^{i phi} C at reference points 0-/0+.  Separated interactions carry
/// no boundary-data map: SeparatedHasNoTransfer.
TransferMatrix transfer_matrix_limit(const LimitInteraction& li, double k);

/// (H - zeta)^{-1} h on [-L, L] for the limit interaction (V = 0), impedance
/// conditions at +-L, interface condition at the origin.
Trajectory resolvent_apply_limit(const LimitInteraction& li, Cplx zeta, const PiecewisePoly& h);

}  // namespace pointlim
