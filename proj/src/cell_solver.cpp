#include "pointlim/cell_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace pointlim {

namespace {

// ------------------------------------------------------- series integration
//
// Every basis solution of the cell equation is advanced by truncated power
// series: on a step [a, a+h] with local coefficient polynomial c(tau) and
// forcing Fo(tau), the recurrence
//     z_{n+2} = ( sum_m c_m z_{n-m} + Fo_n ) / ((n+1)(n+2))
// solves z'' = c z + Fo exactly up to the truncation tail.  The quadrature
// accumulators (g, z), (f, z) are the integrals of conj(g) z per step and
// inherit the same truncation control.

constexpr int kMaxTerms = 56;

bool step_series(const std::vector<Cplx>& cc, const std::vector<Cplx>& fo, Cplx z0, Cplx dz0,
                 double h, std::vector<Cplx>& out) {
    out.clear();
    out.push_back(z0);
    out.push_back(dz0);
    double hk = 1.0;           // h^n for the current n
    double amax = std::abs(z0) + std::abs(dz0) * h;
    int n_min = int(std::max(cc.size(), fo.size())) + 4;
    double t1 = 1e30, t2 = 1e30;  // last two term magnitudes
    for (int n = 0; n + 2 < kMaxTerms; ++n) {
        Cplx s{0.0, 0.0};
        for (size_t m = 0; m < cc.size() && int(m) <= n; ++m) s += cc[m] * out[size_t(n) - m];
        if (size_t(n) < fo.size()) s += fo[size_t(n)];
        Cplx zn2 = s / double((n + 1) * (n + 2));
        out.push_back(zn2);
        double tn = std::abs(zn2) * hk * h * h;
        hk *= h;
        amax = std::max(amax, tn);
        if (n + 2 >= n_min && std::max({tn, t1, t2}) <= 1e-17 * (amax + 1e-300)) return true;
        t2 = t1;
        t1 = tn;
    }
    return false;
}

Cplx series_eval(const std::vector<Cplx>& c, double tau) {
    Cplx r{0.0, 0.0};
    for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * tau + *it;
    return r;
}

Cplx series_deriv(const std::vector<Cplx>& c, double tau) {
    Cplx r{0.0, 0.0};
    for (int n = int(c.size()) - 1; n >= 1; --n) r = r * tau + double(n) * c[size_t(n)];
    return r;
}

/// ∫_0^h p(tau) z(tau) dtau for polynomial coefficients p and series z.
Cplx series_weighted_integral(const std::vector<Cplx>& p, const std::vector<Cplx>& z, double h) {
    if (p.empty()) return {0.0, 0.0};
    size_t n = p.size() + z.size() - 1;
    Cplx total{0.0, 0.0};
    double hk = h;
    std::vector<Cplx> conv(n, Cplx{0.0, 0.0});
    for (size_t i = 0; i < p.size(); ++i)
        for (size_t j = 0; j < z.size(); ++j) conv[i + j] += p[i] * z[j];
    for (size_t k = 0; k < n; ++k) {
        total += conv[k] * hk / double(k + 1);
        hk *= h;
    }
    return total;
}

struct KahanCplx {
    KahanSum re, im;
    void add(Cplx v) {
        re.add(v.real());
        im.add(v.imag());
    }
    Cplx value() const { return {re.value(), im.value()}; }
};

struct BasisSpec {
    Cplx z0, dz0;
    const PiecewisePoly* force = nullptr;  // Fo in z'' = c z + Fo
    Cplx force_sign{1.0, 0.0};
};

struct Pass {
    std::vector<PiecewiseSeries> series;
    std::vector<Cplx> end_v, end_d, acc_g, acc_f;
};

struct CellWorkspace {
    std::vector<PiecewiseSeries> series;  // h1, h2, F, G [, R]
    std::vector<Cplx> end_v, end_d;
    Eigen::Matrix2cd ik, phi;
    Eigen::Vector2cd forced_acc;
    bool has_forced = false;
    double cond = 0.0;
    double err_est = 0.0;
    Cplx eps2E;
    double cond_limit = 1e12;

    // A, B for given Cauchy data; least-squares fallback when I - K is singular
    // but consistent (eps^2 E on an interior eigenvalue of the reduced map).
    Eigen::Vector2cd solve_ab(Cplx c1, Cplx c2) const {
        Eigen::Vector2cd rhs = phi * Eigen::Vector2cd(c1, c2);
        if (has_forced) rhs += forced_acc;
        return lsq(rhs);
    }

    Eigen::Matrix2cd cell_map() const {
        Eigen::Matrix2cd m;
        for (int j = 0; j < 2; ++j) {
            Eigen::Vector2cd ab0 = solve_ab_homog(j == 0 ? 1.0 : 0.0, j == 1 ? 1.0 : 0.0);
            m(0, j) = end_v[size_t(j)] + ab0(0) * end_v[2] + ab0(1) * end_v[3];
            m(1, j) = end_d[size_t(j)] + ab0(0) * end_d[2] + ab0(1) * end_d[3];
        }
        return m;
    }

    Eigen::Vector2cd forced_boundary() const {
        if (!has_forced) return Eigen::Vector2cd::Zero();
        Eigen::Vector2cd ab = solve_ab_forced_only();
        return {ab(0) * end_v[2] + ab(1) * end_v[3] + end_v[4],
                ab(0) * end_d[2] + ab(1) * end_d[3] + end_d[4]};
    }

  private:
    Eigen::Vector2cd lsq(const Eigen::Vector2cd& rhs) const {
        Eigen::JacobiSVD<Eigen::Matrix2cd> svd(ik, Eigen::ComputeFullU | Eigen::ComputeFullV);
        double smax = svd.singularValues()(0), smin = svd.singularValues()(1);
        double c = (smin > 0.0) ? smax / smin : std::numeric_limits<double>::infinity();
        Eigen::Vector2cd x = svd.solve(rhs);
        if (c > cond_limit) {
            double resid = (ik * x - rhs).norm();
            if (resid > 1e-8 * (rhs.norm() + smax * x.norm()) + 1e-12)
                throw SelfConsistencySingular(
                    "self-consistency system is singular (cond " + std::to_string(c) +
                    "): eps^2 E = (" + std::to_string(eps2E.real()) + ", " +
                    std::to_string(eps2E.imag()) +
                    ") hits an interior eigenvalue of the reduced cell map; perturb E");
        }
        return x;
    }

  public:
    Eigen::Vector2cd solve_ab_homog(Cplx c1, Cplx c2) const {
        return lsq(phi * Eigen::Vector2cd(c1, c2));
    }
    Eigen::Vector2cd solve_ab_forced_only() const { return lsq(forced_acc); }
};

Pass run_pass(const Triple& t, double eps, Cplx E, const PiecewisePoly* rhs,
              const std::vector<BasisSpec>& bases, double h_scale) {
    // union breakpoint grid on [-1, 1]
    std::set<double> bs{-1.0, 1.0};
    for (const PiecewisePoly* p : {&t.f.pw(), &t.g.pw(), &t.q.pw()})
        for (double b : p->breaks())
            if (b > -1.0 && b < 1.0) bs.insert(b);
    if (rhs)
        for (double b : rhs->breaks())
            if (b > -1.0 && b < 1.0) bs.insert(b);
    std::vector<double> grid(bs.begin(), bs.end());

    size_t nb = bases.size();
    Pass pass;
    pass.end_v.assign(nb, Cplx{0.0, 0.0});
    pass.end_d.assign(nb, Cplx{0.0, 0.0});
    std::vector<std::vector<SeriesStep>> steps(nb);
    std::vector<KahanCplx> accg(nb), accf(nb);

    std::vector<Cplx> zv(nb), dv(nb);
    for (size_t b = 0; b < nb; ++b) {
        zv[b] = bases[b].z0;
        dv[b] = bases[b].dz0;
    }
    Cplx eps2E = eps * eps * E;

    for (size_t i = 0; i + 1 < grid.size(); ++i) {
        double lo = grid[i], hi = grid[i + 1];
        double mid = 0.5 * (lo + hi);
        // piece of p covering this interval, rebased to tau = t - lo
        auto local_piece = [&](const PiecewisePoly& p) {
            const auto& pb = p.breaks();
            if (mid <= pb.front() || mid >= pb.back()) return Polynomial{};
            auto it = std::upper_bound(pb.begin(), pb.end(), mid);
            size_t idx = std::min(size_t(it - pb.begin()) - 1, p.pieces().size() - 1);
            return p.pieces()[idx].shifted(lo);
        };

        // coefficient polynomial c(tau) = eps q(lo + tau) - eps^2 E
        Polynomial cpoly = eps * local_piece(t.q.pw());
        cpoly += Polynomial::constant(-eps2E);

        double csup = 0.0;
        for (const auto& cv : cpoly.coeffs()) csup += std::abs(cv);
        double hcap = h_scale * std::min(0.5, 1.2 / std::sqrt(1.0 + csup));

        Polynomial gbar = local_piece(t.g.pw()).conjugated();
        Polynomial fbar = local_piece(t.f.pw()).conjugated();
        std::vector<Polynomial> floc(nb);
        for (size_t b = 0; b < nb; ++b)
            if (bases[b].force) floc[b] = bases[b].force_sign * local_piece(*bases[b].force);

        double pos = lo;
        while (pos < hi - 1e-15) {
            double h = std::min(hcap, hi - pos);
            // all bases share the step; halve until every series converges
            std::vector<std::vector<Cplx>> coef(nb);
            for (int tries = 0;; ++tries) {
                bool ok = true;
                Polynomial cstep = cpoly.shifted(pos - lo);
                for (size_t b = 0; b < nb && ok; ++b) {
                    Polynomial fstep = floc[b].shifted(pos - lo);
                    ok = step_series(cstep.coeffs(), fstep.coeffs(), zv[b], dv[b], h, coef[b]);
                }
                if (ok) break;
                if (tries > 40) throw OdeToleranceNotMet("cell series failed to converge");
                h *= 0.5;
            }
            for (size_t b = 0; b < nb; ++b) {
                Polynomial gstep = gbar.shifted(pos - lo);
                Polynomial fstep2 = fbar.shifted(pos - lo);
                accg[b].add(series_weighted_integral(gstep.coeffs(), coef[b], h));
                accf[b].add(series_weighted_integral(fstep2.coeffs(), coef[b], h));
                steps[b].push_back(SeriesStep{pos, h, coef[b]});
                zv[b] = series_eval(coef[b], h);
                dv[b] = series_deriv(coef[b], h);
            }
            pos += h;
        }
    }

    pass.series.reserve(nb);
    for (size_t b = 0; b < nb; ++b) {
        pass.series.emplace_back(std::move(steps[b]));
        pass.end_v[b] = zv[b];
        pass.end_d[b] = dv[b];
        pass.acc_g.push_back(accg[b].value());
        pass.acc_f.push_back(accf[b].value());
    }
    return pass;
}

CellWorkspace build_workspace(const Triple& t, double eps, Cplx E, const PiecewisePoly* rhs,
                              const CellOptions& opt) {
    std::vector<BasisSpec> bases(4);
    bases[0] = {Cplx{1.0, 0.0}, Cplx{0.0, 0.0}, nullptr, {1.0, 0.0}};
    bases[1] = {Cplx{0.0, 0.0}, Cplx{1.0, 0.0}, nullptr, {1.0, 0.0}};
    bases[2] = {Cplx{0.0, 0.0}, Cplx{0.0, 0.0}, &t.f.pw(), {1.0, 0.0}};   // Fo = +f
    bases[3] = {Cplx{0.0, 0.0}, Cplx{0.0, 0.0}, &t.g.pw(), {1.0, 0.0}};   // Fo = +g
    if (rhs) bases.push_back({Cplx{0.0, 0.0}, Cplx{0.0, 0.0}, rhs, {-1.0, 0.0}});  // Fo = -rhs

    // Step-halving (Richardson) verification with automatic refinement: the
    // series tails are controlled per step, but the accuracy is asserted, not
    // trusted a priori.
    Pass prev = run_pass(t, eps, E, rhs, bases, 1.0);
    double err = 0.0;
    double hs = 0.5;
    for (int round = 0;; ++round) {
        Pass next = run_pass(t, eps, E, rhs, bases, hs);
        double scale = 1.0;
        err = 0.0;
        for (size_t b = 0; b < bases.size(); ++b) {
            scale = std::max({scale, std::abs(next.end_v[b]), std::abs(next.end_d[b])});
            err = std::max({err, std::abs(next.end_v[b] - prev.end_v[b]),
                            std::abs(next.end_d[b] - prev.end_d[b]),
                            std::abs(next.acc_g[b] - prev.acc_g[b]),
                            std::abs(next.acc_f[b] - prev.acc_f[b])});
        }
        prev = std::move(next);
        if (err <= 0.25 * opt.ode_tol * scale) break;
        if (round >= opt.max_refine)
            throw OdeToleranceNotMet("cell integration did not reach the requested tolerance");
        hs *= 0.5;
    }

    CellWorkspace w;
    w.has_forced = rhs != nullptr;
    w.err_est = err;
    w.eps2E = eps * eps * E;
    w.cond_limit = opt.cond_limit;
    w.ik(0, 0) = Cplx{1.0, 0.0} - prev.acc_g[2];
    w.ik(0, 1) = -prev.acc_g[3];
    w.ik(1, 0) = -prev.acc_f[2];
    w.ik(1, 1) = Cplx{1.0, 0.0} - prev.acc_f[3];
    w.phi(0, 0) = prev.acc_g[0];
    w.phi(0, 1) = prev.acc_g[1];
    w.phi(1, 0) = prev.acc_f[0];
    w.phi(1, 1) = prev.acc_f[1];
    if (rhs) w.forced_acc = Eigen::Vector2cd(prev.acc_g[4], prev.acc_f[4]);
    w.series = std::move(prev.series);
    w.end_v = std::move(prev.end_v);
    w.end_d = std::move(prev.end_d);
    Eigen::JacobiSVD<Eigen::Matrix2cd> svd(w.ik);
    double smin = svd.singularValues()(1);
    w.cond = smin > 0.0 ? svd.singularValues()(0) / smin
                        : std::numeric_limits<double>::infinity();
    return w;
}

CellSolution assemble_solution(const CellWorkspace& w, Cplx z0, Cplx dz0) {
    Eigen::Vector2cd ab = w.solve_ab(z0, dz0);
    std::vector<const PiecewiseSeries*> parts{&w.series[0], &w.series[1], &w.series[2],
                                              &w.series[3]};
    std::vector<Cplx> weights{z0, dz0, ab(0), ab(1)};
    if (w.has_forced) {
        parts.push_back(&w.series[4]);
        weights.push_back(Cplx{1.0, 0.0});
    }
    CellSolution sol;
    sol.z = PiecewiseSeries::combine(parts, weights);
    sol.a_coef = ab(0);
    sol.b_coef = ab(1);
    sol.z_left = z0;
    sol.dz_left = dz0;
    sol.z_right = Cplx{0.0, 0.0};
    sol.dz_right = Cplx{0.0, 0.0};
    for (size_t i = 0; i < weights.size(); ++i) {
        sol.z_right += weights[i] * w.end_v[i];
        sol.dz_right += weights[i] * w.end_d[i];
    }
    sol.ode_error_estimate = w.err_est;
    sol.consistency_cond = w.cond;
    return sol;
}

}  // namespace

CellSolution solve_cell(const Triple& t, double eps, Cplx E, Cplx z0, Cplx dz0,
                        const CellOptions& opt) {
    if (eps < 0.0 || eps > 1.0) throw Error("eps must lie in [0, 1]");
    CellWorkspace w = build_workspace(t, eps, E, nullptr, opt);
    return assemble_solution(w, z0, dz0);
}

CellSolution solve_cell_forced(const Triple& t, double eps, Cplx E, Cplx z0, Cplx dz0,
                               const PiecewisePoly& rhs, const CellOptions& opt) {
    if (eps < 0.0 || eps > 1.0) throw Error("eps must lie in [0, 1]");
    CellWorkspace w = build_workspace(t, eps, E, &rhs, opt);
    return assemble_solution(w, z0, dz0);
}

TransferMatrix transfer_matrix_eps(const Triple& t, double eps, double k,
                                   const CellOptions& opt) {
    if (eps <= 0.0 || eps > 1.0) throw Error("eps must lie in (0, 1]");
    if (k <= 0.0) throw Error("k must be positive");
    CellWorkspace w = build_workspace(t, eps, Cplx{k * k, 0.0}, nullptr, opt);
    Eigen::Matrix2cd mc = w.cell_map();
    TransferMatrix m;
    m.m(0, 0) = mc(0, 0);
    m.m(0, 1) = eps * mc(0, 1);
    m.m(1, 0) = mc(1, 0) / eps;
    m.m(1, 1) = mc(1, 1);
    m.ref_left = -eps;
    m.ref_right = eps;
    m.spectral = Cplx{k * k, 0.0};
    return m;
}

double ScatteringData::unitarity_defect() const {
    return std::abs(std::norm(t) + std::norm(r_left) - 1.0);
}

namespace {

ScatteringData scattering_from_transfer(const Eigen::Matrix2cd& m, double eps, double k) {
    Cplx ik{0.0, k};
    Cplx ep = std::exp(ik * eps), em = std::exp(-ik * eps);
    ScatteringData s;
    s.k = k;

    // left incidence: m (e^{-ik e} + r e^{ik e}, ik(e^{-ik e} - r e^{ik e})) = (t e^{ik e}, ik t e^{ik e})
    Eigen::Vector2cd w_in(em, ik * em), w_r(ep, -ik * ep), out(ep, ik * ep);
    Eigen::Matrix2cd a;
    a.col(0) = out;
    a.col(1) = -(m * w_r);
    Eigen::Vector2cd b = m * w_in;
    double scale = a.norm() + b.norm();
    if (std::abs(a.determinant()) <= 1e-12 * scale * scale)
        throw MatchingSingular("plane-wave matching system is singular at this k");
    Eigen::Vector2cd x = a.fullPivLu().solve(b);
    s.t = x(0);
    s.r_left = x(1);

    // right incidence: m (t' e^{ik e}, -ik t' e^{ik e}) = (e^{-ik e} + rr e^{ik e}, -ik e^{-ik e} + ik rr e^{ik e})
    Eigen::Vector2cd w_l(ep, -ik * ep);
    Eigen::Matrix2cd a2;
    a2.col(0) = m * w_l;
    a2.col(1) = Eigen::Vector2cd(-ep, -ik * ep);
    Eigen::Vector2cd b2(em, -ik * em);
    if (std::abs(a2.determinant()) <= 1e-12 * scale * scale)
        throw MatchingSingular("plane-wave matching system is singular at this k");
    Eigen::Vector2cd x2 = a2.fullPivLu().solve(b2);
    s.r_right = x2(1);
    return s;
}

}  // namespace

ScatteringData scattering_eps(const Triple& t, double eps, double k, const CellOptions& opt) {
    TransferMatrix tm = transfer_matrix_eps(t, eps, k, opt);
    return scattering_from_transfer(tm.m, eps, k);
}

// ------------------------------------------------------- rank-two Neumann

Rank2Result solve_rank2_neumann(const Triple& t, const PiecewisePoly& r, Cplx a, Cplx b,
                                const Tolerances& tol) {
    InvariantSet inv = compute_invariants(t, tol);
    TailedProfile f2 = antiderivative_pw(t.f.pw(), 2);
    TailedProfile g2 = antiderivative_pw(t.g.pw(), 2);
    TailedProfile f1 = antiderivative_pw(t.f.pw(), 1);
    TailedProfile g1 = antiderivative_pw(t.g.pw(), 1);
    TailedProfile r2t = antiderivative_pw(r, 2);
    const PiecewisePoly& r2 = r2t.core;

    Cplx one_r = r.integral(-1.0, 1.0);             // (1, r)
    Cplx omega_r = inner(inv.omega.core, r);        // (omega, r)
    Cplx sigma_r = inner(inv.sigma_state.core, r);  // (sigma, r)
    double rnorm = l2norm_I(r);
    double defect_scale = 1.0 + std::abs(a) + std::abs(b) + rnorm;
    const double defect_tol = 1e-10;

    // resonance kind
    bool lambda_zero = tol.is_zero(inv.lambda_val, inv.scale_lambda);
    ResonanceKind kind = ResonanceKind::None;
    if (lambda_zero) {
        if (inv.zero_mean)
            kind = tol.is_zero(inv.pi_val, inv.scale_pi) ? ResonanceKind::Double
                                                         : ResonanceKind::ConstOnly;
        else
            kind = ResonanceKind::Sigma;
    }

    Rank2Result out;
    out.kind = kind;

    Polynomial xp1({Cplx{1.0, 0.0}, Cplx{1.0, 0.0}});  // x + 1
    PiecewisePoly xp1_pw({-1.0, 1.0}, {xp1});

    auto build_v = [&](Cplx A, Cplx B, Cplx c3) {
        PiecewisePoly v = A * f2.core + B * g2.core;
        v = v - r2;
        v = v + c3 * PiecewisePoly({-1.0, 1.0}, {Polynomial::constant(Cplx{1.0, 0.0})});
        v = v + a * xp1_pw;
        return v;
    };

    if (kind == ResonanceKind::None) {
        Eigen::Matrix3cd m;
        Eigen::Vector3cd rhs;
        m << Cplx{1.0, 0.0} - inner(t.g, f2), -inner(t.g, g2), -std::conj(inv.g0),
             -inner(t.f, f2), Cplx{1.0, 0.0} - inner(t.f, g2), -std::conj(inv.f0),
             inv.f0, inv.g0, Cplx{0.0, 0.0};
        rhs << a * (std::conj(inv.g1) + std::conj(inv.g0)) - inner(t.g.pw(), r2),
               a * (std::conj(inv.f1) + std::conj(inv.f0)) - inner(t.f.pw(), r2),
               b - a + one_r;
        Eigen::Vector3cd x = m.fullPivLu().solve(rhs);
        out.v = build_v(x(0), x(1), x(2));
        out.solvable = true;
    } else if (kind == ResonanceKind::ConstOnly) {
        Cplx defect = a - b - one_r;
        if (std::abs(defect) > defect_tol * defect_scale) {
            out.violated = "a - b = (1, r)";
            out.defect = defect;
            return out;
        }
        double nf = l2norm(f1), ng = l2norm(g1);
        Cplx p = inner(f1, g1);
        Eigen::Matrix2cd m;
        m << Cplx{nf * nf, 0.0}, p + 1.0, std::conj(p) + 1.0, Cplx{ng * ng, 0.0};
        Eigen::Vector2cd rhs(a * std::conj(inv.f1) - inner(t.f.pw(), r2),
                             a * std::conj(inv.g1) - inner(t.g.pw(), r2));
        Eigen::Vector2cd x = m.fullPivLu().solve(rhs);
        out.v = build_v(x(0), x(1), Cplx{0.0, 0.0});
        out.solvable = true;
    } else if (kind == ResonanceKind::Double) {
        Cplx defect1 = a - b - one_r;
        Cplx defect2 = b * std::conj(inv.kappa) + omega_r;
        if (std::abs(defect1) > defect_tol * defect_scale) {
            out.violated = "a - b = (1, r)";
            out.defect = defect1;
            return out;
        }
        if (std::abs(defect2) > defect_tol * defect_scale * (1.0 + std::abs(inv.kappa))) {
            out.violated = "b conj(kappa) = -(omega, r)";
            out.defect = defect2;
            return out;
        }
        double nf = l2norm(f1);
        Cplx z1 = a * std::conj(inv.f1) - inner(t.f.pw(), r2);
        Cplx c1 = z1 / (nf * nf);
        PiecewisePoly vstar = build_v(c1, Cplx{0.0, 0.0}, Cplx{0.0, 0.0});
        bool kappa_zero = tol.is_zero(inv.kappa, inv.scale_kappa);
        if (!kappa_zero) {
            Cplx corr = (inv.f1 * c1 + r2t.eval(1.0) - 2.0 * a) / inv.kappa;
            out.v = vstar + corr * inv.omega.core;
        } else {
            Cplx ww = inner(inv.omega, inv.omega);
            Cplx wv = inner(inv.omega.core, vstar);
            out.v = vstar - (wv / ww) * inv.omega.core;
        }
        out.solvable = true;
    } else {  // Sigma
        Cplx defect = a * std::conj(inv.sigma_state_minus) - b * std::conj(inv.sigma_state_plus) -
                      sigma_r;
        if (std::abs(defect) > defect_tol * defect_scale * (1.0 + inv.scale_sigma)) {
            out.violated = "a conj(sigma-) - b conj(sigma+) = (sigma, r)";
            out.defect = defect;
            return out;
        }
        Eigen::Matrix3cd m;
        Eigen::Vector3cd rhs;
        m << Cplx{1.0, 0.0} - inner(t.g, f2), -inner(t.g, g2), -std::conj(inv.g0),
             -inner(t.f, f2), Cplx{1.0, 0.0} - inner(t.f, g2), -std::conj(inv.f0),
             inv.f0, inv.g0, Cplx{0.0, 0.0};
        rhs << a * (std::conj(inv.g1) + std::conj(inv.g0)) - inner(t.g.pw(), r2),
               a * (std::conj(inv.f1) + std::conj(inv.f0)) - inner(t.f.pw(), r2),
               b - a + one_r;
        Eigen::JacobiSVD<Eigen::Matrix3cd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
        Eigen::Vector3cd x = svd.solve(rhs);  // min-norm least squares
        PiecewisePoly v = build_v(x(0), x(1), x(2));
        // project out the sigma direction: (sigma, v) = 0
        Cplx ss = inner(inv.sigma_state, inv.sigma_state);
        Cplx sv = inner(inv.sigma_state.core, v);
        out.v = v - (sv / ss) * inv.sigma_state.core;
        out.solvable = true;
    }

    PiecewisePoly vpp = out.v.derivative().derivative();
    Cplx gv = inner(t.g.pw(), out.v);
    Cplx fv = inner(t.f.pw(), out.v);
    PiecewisePoly resid =
        ((Cplx{-1.0, 0.0} * vpp + gv * t.f.pw()) + fv * t.g.pw()) - r;
    out.residual = l2norm_I(resid);
    return out;
}

// ------------------------------------------------------- inner expansion

InnerExpansion inner_expansion(const Triple& t, const LimitInteraction& li, Cplx ym, Cplx dym,
                               Cplx yp, Cplx dyp, const Tolerances& tol) {
    InvariantSet inv = compute_invariants(t, tol);
    double scale = std::abs(ym) + std::abs(dym) + std::abs(yp) + std::abs(dyp) + 1.0;
    const double ctol = 1e-9;

    if (li.kind == LimitInteraction::Connected) {
        Cplx ph = std::exp(Cplx{0.0, li.phase});
        Cplx ep0 = ph * (li.coupling(0, 0) * ym + li.coupling(0, 1) * dym);
        Cplx ep1 = ph * (li.coupling(1, 0) * ym + li.coupling(1, 1) * dym);
        if (std::abs(yp - ep0) + std::abs(dyp - ep1) > ctol * scale)
            throw CouplingViolated("boundary data violates the connected coupling conditions");
    } else {
        auto check = [&](const BoundaryCondition& bc, Cplx v, Cplx dv) {
            double err = bc.kind == BoundaryCondition::Dirichlet
                             ? std::abs(v)
                             : std::abs(dv - bc.theta * v);
            if (err > ctol * scale)
                throw CouplingViolated("boundary data violates the separated conditions");
        };
        check(li.left, ym, dym);
        check(li.right, yp, dyp);
    }

    InnerExpansion out;
    bool kappa_zero = tol.is_zero(inv.kappa, inv.scale_kappa);
    switch (li.tag) {
        case CaseTag::A1:
        case CaseTag::B1: {
            if (!kappa_zero) {
                out.u = TailedProfile::constant(ym);
                out.u += ((yp - ym) / inv.kappa) * inv.omega;
            } else {
                // A1 path with kappa = 0, a2 != 0: u = y(0) (1 - conj(a1)/a2 omega)
                out.u = TailedProfile::constant(ym);
                out.u += (-std::conj(inv.a1) / inv.a2 * ym) * inv.omega;
            }
            break;
        }
        case CaseTag::A2: {
            Cplx c0 = yp / inv.sigma_state_plus;
            out.u = c0 * inv.sigma_state;
            break;
        }
        case CaseTag::A3: {
            out.u = TailedProfile::constant(ym);
            break;
        }
        case CaseTag::B2: {
            bool minus_zero = tol.is_zero(inv.sigma_state_minus, inv.scale_sigma);
            Cplx c0 = minus_zero ? yp / inv.sigma_state_plus : ym / inv.sigma_state_minus;
            out.u = c0 * inv.sigma_state;
            break;
        }
        case CaseTag::B3: {
            out.u = TailedProfile::constant(Cplx{0.0, 0.0});
            break;
        }
    }

    PiecewisePoly forcing = Cplx{-1.0, 0.0} * (t.q.pw() * out.u.core);
    Rank2Result v = solve_rank2_neumann(t, forcing, dym, dyp, tol);
    if (!v.solvable)
        throw Error("inner expansion: rank-two problem unexpectedly unsolvable (" + v.violated +
                    "); classifier/solver inconsistency");
    // case-specific normalization beyond the solver default
    if (li.tag == CaseTag::B2) {
        bool minus_zero = tol.is_zero(inv.sigma_state_minus, inv.scale_sigma);
        if (minus_zero) {
            Cplx c = v.v.eval(1.0) / inv.sigma_state_plus;
            v.v = v.v - c * inv.sigma_state.core;
        } else {
            Cplx c = v.v.eval(-1.0) / inv.sigma_state_minus;
            v.v = v.v - c * inv.sigma_state.core;
        }
    }
    out.v = v.v;
    return out;
}

// ------------------------------------------------------- resolvent

double resolvent_truncation_length(Cplx zeta, const PiecewisePoly& h) {
    Cplx mu = sqrt_upper(zeta);
    double L0 = std::max({1.0, std::abs(h.support_lo()), std::abs(h.support_hi())});
    double pad = 12.0 * std::log(10.0) / mu.imag();
    if (!(pad < 1e4))
        throw TruncationTooSmall("Im sqrt(zeta) too small for a finite truncation window");
    return L0 + pad;
}

Trajectory resolvent_apply_eps(const Triple& t, double eps, Cplx zeta, const PiecewisePoly& h,
                               const CellOptions& opt) {
    if (zeta.imag() == 0.0) throw Error("resolvent requires Im zeta != 0");
    if (eps <= 0.0 || eps > 1.0) throw Error("eps must lie in (0, 1]");
    Cplx mu = sqrt_upper(zeta);
    double L = resolvent_truncation_length(zeta, h);

    // exterior particular solutions with zero Cauchy data at -L / +L
    std::vector<ExpSegment> segs_left, segs_right;
    Cplx p0{0.0, 0.0}, p1{0.0, 0.0};
    propagate_exterior(segs_left, h, mu, -L, -eps, true, p0, p1);
    Cplx q0{0.0, 0.0}, q1{0.0, 0.0};
    propagate_exterior(segs_right, h, mu, eps, L, false, q0, q1);

    // cell with inhomogeneity eps^2 h(eps t)
    std::vector<double> tb{-1.0, 1.0};
    for (double xb : h.breaks()) {
        double tbk = xb / eps;
        if (tbk > -1.0 && tbk < 1.0) tb.push_back(tbk);
    }
    std::sort(tb.begin(), tb.end());
    tb.erase(std::unique(tb.begin(), tb.end()), tb.end());
    std::vector<Polynomial> tp;
    for (size_t i = 0; i + 1 < tb.size(); ++i) {
        double mid = 0.5 * (tb[i] + tb[i + 1]) * eps;
        Polynomial piece;
        const auto& hb = h.breaks();
        if (mid > hb.front() && mid < hb.back()) {
            auto it = std::upper_bound(hb.begin(), hb.end(), mid);
            size_t idx = std::min(size_t(it - hb.begin()) - 1, h.pieces().size() - 1);
            piece = (eps * eps) * h.pieces()[idx].scaled_arg(eps);
        }
        tp.push_back(piece);
    }
    PiecewisePoly rhs(tb, tp);

    CellWorkspace w = build_workspace(t, eps, zeta, &rhs, opt);
    Eigen::Matrix2cd mc = w.cell_map();
    Eigen::Vector2cd fb = w.forced_boundary();

    // matching unknowns: alpha (left outgoing e^{-i mu (x+eps)}), beta (right e^{i mu (x-eps)})
    Cplx iu = Cplx{0.0, 1.0} * mu;
    // z(-1) = alpha + p0, z'(-1) = eps(-i mu alpha + p1)
    // y(eps) = beta + q0 = [mc (z(-1), z'(-1)) + fb](0)
    // y'(eps) = i mu beta + q1 = [..](1)/eps
    Eigen::Matrix2cd A;
    Eigen::Vector2cd B;
    Cplx m00 = mc(0, 0), m01 = mc(0, 1), m10 = mc(1, 0), m11 = mc(1, 1);
    A(0, 0) = m00 - iu * eps * m01;
    A(0, 1) = Cplx{-1.0, 0.0};
    A(1, 0) = (m10 - iu * eps * m11) / eps;
    A(1, 1) = -iu;
    B(0) = q0 - (m00 * p0 + m01 * eps * p1 + fb(0));
    B(1) = q1 - (m10 * p0 + m11 * eps * p1 + fb(1)) / eps;
    Eigen::Vector2cd x = A.fullPivLu().solve(B);
    Cplx alpha = x(0), beta = x(1);

    // assemble: left hom alpha e^{-i mu (x+eps)}, right hom beta e^{i mu (x-eps)}
    for (auto& s : segs_left) s.cm += alpha * std::exp(-iu * (s.x0 + eps));
    for (auto& s : segs_right) s.cp += beta * std::exp(iu * (s.x0 - eps));

    Cplx z0 = alpha + p0;
    Cplx dz0 = eps * (-iu * alpha + p1);
    CellSolution cs = assemble_solution(w, z0, dz0);

    std::vector<ExpSegment> segs;
    segs.reserve(segs_left.size() + segs_right.size());
    segs.insert(segs.end(), segs_left.begin(), segs_left.end());
    segs.insert(segs.end(), segs_right.begin(), segs_right.end());
    Trajectory::Cell cell;
    cell.eps = eps;
    cell.z = cs.z;
    return Trajectory(std::move(segs), cell, L);
}

}  // namespace pointlim
