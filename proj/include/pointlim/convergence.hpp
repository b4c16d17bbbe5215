#pragma once

#include <span>
#include <string>
#include <vector>

#include "pointlim/cell_solver.hpp"
#include "pointlim/point_ops.hpp"

namespace pointlim {

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // RMS deviation of the log-log fit
};

/// Least squares on (log eps, log error); needs >= 3 points with positive error.
RateFit fit_rate(std::span<const std::pair<double, double>> points);

struct RatePoint {
    double eps = 0.0;
    double error = 0.0;
    bool ok = true;
    std::string flag;  // "", "exact", or an error note
};

struct ConvergenceReport {
    std::vector<RatePoint> points;  // sorted by decreasing eps
    RateFit fit;
    bool exact = false;    // every error vanished; no slope fitted
    bool fitted = false;
    std::string metric;    // "scattering_at_k" | "resolvent_L2_sample" | "inner_expansion_L2"
    double k = 0.0;
    Cplx zeta;
};

/// Scattering error |t_eps - t_lim| + |r_eps - r_lim| against the classified
/// limit (both reflections for separated limits, where t_lim = 0).
ConvergenceReport scattering_convergence(const Triple& t, double k, std::span<const double> eps,
                                         const Tolerances& tol = {});

/// Same with an explicitly prescribed limit (override hook for the CLI).
ConvergenceReport scattering_convergence_target(const Triple& t, const LimitInteraction& target,
                                                double k, std::span<const double> eps);

/// Sampled-resolvent error ||y_eps - y_lim||_{L2(-L, L)} / ||h||.
ConvergenceReport resolvent_convergence(const Triple& t, Cplx zeta, const PiecewisePoly& h,
                                        std::span<const double> eps, const Tolerances& tol = {});
ConvergenceReport resolvent_convergence_target(const Triple& t, const LimitInteraction& target,
                                               Cplx zeta, const PiecewisePoly& h,
                                               std::span<const double> eps);

/// ||z_eps/z_eps(-1) - u||_{L2(I)} for the scattering cell solution at k,
/// u being the half-bound-state interpolant of the normalized boundary data.
ConvergenceReport inner_expansion_convergence(const Triple& t, double k,
                                              std::span<const double> eps,
                                              const Tolerances& tol = {});

/// Geometric grid 2^{-a} .. 2^{-b}.
std::vector<double> dyadic_eps(int a, int b);

}  // namespace pointlim
