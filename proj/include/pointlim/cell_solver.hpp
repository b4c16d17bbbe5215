#pragma once

#include <Eigen/Dense>

#include "pointlim/classifier.hpp"
#include "pointlim/resonance.hpp"
#include "pointlim/trajectory.hpp"

namespace pointlim {

struct CellOptions {
    double ode_tol = 1e-10;     // target global error on [-1, 1]
    double cond_limit = 1e12;   // self-consistency condition-number threshold
    int max_refine = 3;         // Richardson refinement rounds
};

/// Solution of the rescaled cell equation
///   -z'' + (g,z) f + (f,z) g + eps q z = eps^2 E z + rhs   on [-1, 1]
/// with prescribed Cauchy data at t = -1.
struct CellSolution {
    PiecewiseSeries z;
    Cplx a_coef, b_coef;  // A = (g,z), B = (f,z)
    Cplx z_left, dz_left, z_right, dz_right;
    double ode_error_estimate = 0.0;
    double consistency_cond = 0.0;  // condition number of I - K
};

CellSolution solve_cell(const Triple& t, double eps, Cplx E, Cplx z0, Cplx dz0,
                        const CellOptions& opt = {});

/// Same equation with an explicit inhomogeneity (used by the resolvent path).
CellSolution solve_cell_forced(const Triple& t, double eps, Cplx E, Cplx z0, Cplx dz0,
                               const PiecewisePoly& rhs, const CellOptions& opt = {});

/// Boundary-data map (y, y') across [ref_left, ref_right].
struct TransferMatrix {
    Eigen::Matrix2cd m;
    double ref_left = 0.0, ref_right = 0.0;
    Cplx spectral;  // E = k^2 (or the cell E)
};

/// Transfer matrix of H_eps across [-eps, eps] at wavenumber k:
/// m = diag(1, eps^-1) M_cell diag(1, eps).
TransferMatrix transfer_matrix_eps(const Triple& t, double eps, double k,
                                   const CellOptions& opt = {});

struct ScatteringData {
    enum Reference { Origin, PmEps };
    double k = 0.0;
    Cplx t, r_left, r_right;
    Reference reference = Origin;  // amplitudes carried to the origin
    double unitarity_defect() const;
};

/// Plane-wave scattering of H_eps (V = 0), amplitudes referenced to the
/// origin: y = e^{ikx} + r e^{-ikx} on the left, t e^{ikx} on the right.
ScatteringData scattering_eps(const Triple& t, double eps, double k,
                              const CellOptions& opt = {});

/// Nonhomogeneous Neumann problem of the rank-two operator:
///   -v'' + (g,v) f + (f,v) g = r on I,  v'(-1) = a,  v'(1) = b.
/// Solvability is governed by the half-bound states; the returned solution is
/// normalized per resonance kind: v(+-1) = 0 when the double resonance has
/// kappa != 0; v(-1) = 0 and (omega, v) = 0 when kappa = 0; (sigma, v) = 0 in
/// the sigma-resonant case; v(-1) = 0 when only constants are resonant.
struct Rank2Result {
    bool solvable = false;
    PiecewisePoly v;
    double residual = 0.0;      // L2 residual of the equation
    std::string violated;       // name of the violated solvability condition
    Cplx defect;                // its defect value
    ResonanceKind kind = ResonanceKind::None;
};

Rank2Result solve_rank2_neumann(const Triple& t, const PiecewisePoly& r, Cplx a, Cplx b,
                                const Tolerances& tol = {});

/// Leading inner-expansion terms for prescribed limit boundary data
/// (y-, y-', y+, y+'): u is the half-bound-state interpolant, v solves the
/// rank-two Neumann problem with forcing -q u and slopes (y-', y+').
struct InnerExpansion {
    TailedProfile u;
    PiecewisePoly v;
};

InnerExpansion inner_expansion(const Triple& t, const LimitInteraction& li, Cplx ym, Cplx dym,
                               Cplx yp, Cplx dyp, const Tolerances& tol = {});

/// (H_eps - zeta)^{-1} h on [-L, L] with impedance truncation y' -+ i sqrt(zeta) y = 0
/// at +-L; h is piecewise polynomial with compact support.
Trajectory resolvent_apply_eps(const Triple& t, double eps, Cplx zeta, const PiecewisePoly& h,
                               const CellOptions& opt = {});

/// Truncation length used by the resolvent solvers for given zeta and h.
double resolvent_truncation_length(Cplx zeta, const PiecewisePoly& h);

}  // namespace pointlim
