#include "pointlim/convergence.hpp"

#include <algorithm>
#include <cmath>

namespace pointlim {

RateFit fit_rate(std::span<const std::pair<double, double>> points) {
    std::vector<std::pair<double, double>> usable;
    for (const auto& [e, v] : points)
        if (v > 0.0 && e > 0.0) usable.emplace_back(std::log(e), std::log(v));
    if (usable.size() < 3)
        throw InsufficientPoints("rate fit needs at least 3 points with positive errors");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& [x, y] : usable) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double n = double(usable.size());
    double denom = n * sxx - sx * sx;
    RateFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss = 0.0;
    for (const auto& [x, y] : usable) {
        double d = y - (fit.intercept + fit.slope * x);
        ss += d * d;
    }
    fit.residual = std::sqrt(ss / n);
    return fit;
}

namespace {

void finalize(ConvergenceReport& rep) {
    std::sort(rep.points.begin(), rep.points.end(),
              [](const RatePoint& a, const RatePoint& b) { return a.eps > b.eps; });
    std::vector<std::pair<double, double>> pts;
    double maxerr = 0.0;
    for (auto& p : rep.points) {
        if (!p.ok) continue;
        maxerr = std::max(maxerr, p.error);
        pts.emplace_back(p.eps, p.error);
    }
    if (maxerr <= 1e-13) {
        rep.exact = true;
        for (auto& p : rep.points)
            if (p.ok) p.flag = "exact";
        return;
    }
    try {
        rep.fit = fit_rate(pts);
        rep.fitted = true;
    } catch (const InsufficientPoints&) {
        rep.fitted = false;
    }
}

double scattering_error(const ScatteringData& se, const ScatteringData& sl, bool separated) {
    double err = std::abs(se.t - sl.t) + std::abs(se.r_left - sl.r_left);
    if (separated) err += std::abs(se.r_right - sl.r_right);
    return err;
}

}  // namespace

ConvergenceReport scattering_convergence_target(const Triple& t, const LimitInteraction& target,
                                                double k, std::span<const double> eps) {
    ConvergenceReport rep;
    rep.metric = "scattering_at_k";
    rep.k = k;
    ScatteringData sl = scattering_limit(target, k);
    bool separated = target.kind == LimitInteraction::Separated;
    for (double e : eps) {
        RatePoint p;
        p.eps = e;
        try {
            ScatteringData se = scattering_eps(t, e, k);
            p.error = scattering_error(se, sl, separated);
        } catch (const Error& err) {
            p.ok = false;
            p.flag = err.what();
        }
        rep.points.push_back(std::move(p));
    }
    finalize(rep);
    return rep;
}

namespace {

LimitInteraction limit_of(const Triple& t, const Tolerances& tol) {
    if (t.trivial_pair()) return delta_limit(moment(t.q, 0).real());
    return classify(t, tol);
}

}  // namespace

ConvergenceReport scattering_convergence(const Triple& t, double k, std::span<const double> eps,
                                         const Tolerances& tol) {
    return scattering_convergence_target(t, limit_of(t, tol), k, eps);
}

ConvergenceReport resolvent_convergence_target(const Triple& t, const LimitInteraction& target,
                                               Cplx zeta, const PiecewisePoly& h,
                                               std::span<const double> eps) {
    ConvergenceReport rep;
    rep.metric = "resolvent_L2_sample";
    rep.zeta = zeta;
    double hnorm = std::sqrt(std::max(0.0, (h.conjugated() * h).integral().real()));
    if (hnorm == 0.0) {
        for (double e : eps) rep.points.push_back({e, 0.0, true, ""});
        finalize(rep);
        return rep;
    }
    Trajectory ylim = resolvent_apply_limit(target, zeta, h);
    for (double e : eps) {
        RatePoint p;
        p.eps = e;
        try {
            Trajectory yeps = resolvent_apply_eps(t, e, zeta, h);
            p.error = l2_diff(yeps, ylim) / hnorm;
        } catch (const Error& err) {
            p.ok = false;
            p.flag = err.what();
        }
        rep.points.push_back(std::move(p));
    }
    finalize(rep);
    return rep;
}

ConvergenceReport resolvent_convergence(const Triple& t, Cplx zeta, const PiecewisePoly& h,
                                        std::span<const double> eps, const Tolerances& tol) {
    return resolvent_convergence_target(t, limit_of(t, tol), zeta, h, eps);
}

ConvergenceReport inner_expansion_convergence(const Triple& t, double k,
                                              std::span<const double> eps,
                                              const Tolerances& tol) {
    ConvergenceReport rep;
    rep.metric = "inner_expansion_L2";
    rep.k = k;
    InvariantSet inv = compute_invariants(t, tol);
    bool kappa_zero = tol.is_zero(inv.kappa, inv.scale_kappa);
    for (double e : eps) {
        RatePoint p;
        p.eps = e;
        try {
            ScatteringData s = scattering_eps(t, e, k);
            Cplx ik{0.0, k};
            Cplx em = std::exp(-ik * e), ep = std::exp(ik * e);
            Cplx yv = em + s.r_left * ep;
            Cplx yd = ik * (em - s.r_left * ep);
            CellSolution z = solve_cell(t, e, Cplx{k * k, 0.0}, yv, e * yd);
            Cplx z0 = z.z_left;
            // normalize at the left cell edge and interpolate within the
            // half-bound-state span
            Cplx zr = z.z_right / z0;
            TailedProfile u = TailedProfile::constant(Cplx{1.0, 0.0});
            if (!kappa_zero) {
                u += ((zr - 1.0) / inv.kappa) * inv.omega;
            }
            std::vector<double> knots = z.z.knots();
            double err2 = gauss_integrate_real(
                [&](double x) { return std::norm(z.z.eval(x) / z0 - u.eval(x)); }, -1.0, 1.0,
                knots, 0.25);
            p.error = std::sqrt(std::max(0.0, err2));
        } catch (const Error& err) {
            p.ok = false;
            p.flag = err.what();
        }
        rep.points.push_back(std::move(p));
    }
    finalize(rep);
    return rep;
}

std::vector<double> dyadic_eps(int a, int b) {
    std::vector<double> out;
    for (int j = a; j <= b; ++j) out.push_back(std::pow(2.0, -j));
    return out;
}

}  // namespace pointlim
