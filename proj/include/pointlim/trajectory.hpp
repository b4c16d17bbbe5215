#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "pointlim/profiles.hpp"

namespace pointlim {

/// Fixed-order Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes, weights;
};
const GaussRule& gauss_rule();  // 20-point

/// ∫_a^b f dx by composite Gauss on panels no longer than max_len.
Cplx gauss_integrate(const std::function<Cplx(double)>& f, double a, double b,
                     const std::vector<double>& interior_knots = {}, double max_len = 0.5);
double gauss_integrate_real(const std::function<double(double)>& f, double a, double b,
                            const std::vector<double>& interior_knots = {}, double max_len = 0.5);

/// Dense ODE output: truncated power series per step, z(a + tau) = sum c_n tau^n.
struct SeriesStep {
    double a = 0.0, h = 0.0;
    std::vector<Cplx> c;
};

class PiecewiseSeries {
  public:
    PiecewiseSeries() = default;
    explicit PiecewiseSeries(std::vector<SeriesStep> steps) : steps_(std::move(steps)) {}

    bool empty() const { return steps_.empty(); }
    double t_lo() const { return steps_.front().a; }
    double t_hi() const { return steps_.back().a + steps_.back().h; }
    const std::vector<SeriesStep>& steps() const { return steps_; }

    Cplx eval(double t) const;
    Cplx deriv(double t) const;
    Cplx deriv2(double t) const;

    std::vector<double> knots() const;

    /// Linear combination of series sharing one step grid.
    static PiecewiseSeries combine(const std::vector<const PiecewiseSeries*>& parts,
                                   const std::vector<Cplx>& weights);

  private:
    std::vector<SeriesStep> steps_;
};

/// One exponential segment of a resolvent trajectory:
/// y(x) = cp e^{i mu (x - x0)} + cm e^{-i mu (x - x0)} + part(x - x0).
struct ExpSegment {
    double x0 = 0.0, x1 = 0.0;
    Cplx mu;
    Cplx cp, cm;
    Polynomial part;

    Cplx eval(double x) const;
    Cplx deriv(double x) const;
};

/// Piecewise representation of a resolvent solution on [-L, L]: exponential
/// segments outside the interaction, an eps-scaled cell series inside.
class Trajectory {
  public:
    struct Cell {
        double eps = 0.0;
        PiecewiseSeries z;  // y(x) = z(x / eps) on [-eps, eps]
    };

    Trajectory(std::vector<ExpSegment> segments, std::optional<Cell> cell, double L);

    double L() const { return L_; }
    Cplx eval(double x) const;
    Cplx deriv(double x) const;
    std::vector<double> knots() const;

  private:
    std::vector<ExpSegment> segs_;  // sorted by x0
    std::optional<Cell> cell_;
    double L_;
};

/// L2 norms over the common truncation interval, by composite Gauss panels.
double l2_diff(const Trajectory& a, const Trajectory& b);
double l2_norm(const Trajectory& a);

/// Principal square root folded onto the Im > 0 branch.
Cplx sqrt_upper(Cplx zeta);

/// Propagate y'' + zeta y = -h across [xa, xb] with mu = sqrt_upper(zeta).
/// Cauchy data (v, d) is given at xa when data_at_left, else at xb; on return
/// it holds the values at the far end.  Segments (split at the breakpoints of
/// h and capped in length) are appended to segs.
void propagate_exterior(std::vector<ExpSegment>& segs, const PiecewisePoly& h, Cplx mu, double xa,
                        double xb, bool data_at_left, Cplx& v, Cplx& d);

}  // namespace pointlim
