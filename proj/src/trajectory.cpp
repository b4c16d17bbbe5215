#include "pointlim/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace pointlim {

namespace {

GaussRule make_gauss(int n) {
    // Newton iteration on Legendre polynomials; deterministic.
    GaussRule r;
    r.nodes.resize(size_t(n));
    r.weights.resize(size_t(n));
    for (int i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        double dp = n * (x * p1 - p0) / (x * x - 1.0);
        r.nodes[size_t(n - 1 - i)] = x;
        r.weights[size_t(n - 1 - i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

std::vector<double> make_panels(double a, double b, const std::vector<double>& knots,
                                double max_len) {
    std::set<double> s{a, b};
    for (double x : knots)
        if (x > a && x < b) s.insert(x);
    std::vector<double> coarse(s.begin(), s.end());
    std::vector<double> out;
    for (size_t i = 0; i + 1 < coarse.size(); ++i) {
        out.push_back(coarse[i]);
        double len = coarse[i + 1] - coarse[i];
        int parts = std::max(1, int(std::ceil(len / max_len)));
        for (int j = 1; j < parts; ++j) out.push_back(coarse[i] + len * double(j) / parts);
    }
    out.push_back(coarse.back());
    return out;
}

}  // namespace

const GaussRule& gauss_rule() {
    static const GaussRule r = make_gauss(20);
    return r;
}

Cplx gauss_integrate(const std::function<Cplx(double)>& f, double a, double b,
                     const std::vector<double>& interior_knots, double max_len) {
    const GaussRule& g = gauss_rule();
    std::vector<double> panels = make_panels(a, b, interior_knots, max_len);
    KahanSum re, im;
    for (size_t i = 0; i + 1 < panels.size(); ++i) {
        double mid = 0.5 * (panels[i] + panels[i + 1]);
        double half = 0.5 * (panels[i + 1] - panels[i]);
        for (size_t j = 0; j < g.nodes.size(); ++j) {
            Cplx v = f(mid + half * g.nodes[j]) * (half * g.weights[j]);
            re.add(v.real());
            im.add(v.imag());
        }
    }
    return {re.value(), im.value()};
}

double gauss_integrate_real(const std::function<double(double)>& f, double a, double b,
                            const std::vector<double>& interior_knots, double max_len) {
    return gauss_integrate([&](double x) { return Cplx{f(x), 0.0}; }, a, b, interior_knots,
                           max_len)
        .real();
}

// ----------------------------------------------------------- PiecewiseSeries

namespace {

const SeriesStep* find_step(const std::vector<SeriesStep>& steps, double t) {
    if (steps.empty()) return nullptr;
    if (t < steps.front().a || t > steps.back().a + steps.back().h + 1e-14) return nullptr;
    auto it = std::upper_bound(steps.begin(), steps.end(), t,
                               [](double v, const SeriesStep& s) { return v < s.a; });
    size_t i = (it == steps.begin()) ? 0 : size_t(it - steps.begin()) - 1;
    return &steps[std::min(i, steps.size() - 1)];
}

}  // namespace

Cplx PiecewiseSeries::eval(double t) const {
    const SeriesStep* s = find_step(steps_, t);
    if (!s) return {0.0, 0.0};
    double tau = t - s->a;
    Cplx r{0.0, 0.0};
    for (auto it = s->c.rbegin(); it != s->c.rend(); ++it) r = r * tau + *it;
    return r;
}

Cplx PiecewiseSeries::deriv(double t) const {
    const SeriesStep* s = find_step(steps_, t);
    if (!s) return {0.0, 0.0};
    double tau = t - s->a;
    Cplx r{0.0, 0.0};
    for (int n = int(s->c.size()) - 1; n >= 1; --n) r = r * tau + double(n) * s->c[size_t(n)];
    return r;
}

Cplx PiecewiseSeries::deriv2(double t) const {
    const SeriesStep* s = find_step(steps_, t);
    if (!s) return {0.0, 0.0};
    double tau = t - s->a;
    Cplx r{0.0, 0.0};
    for (int n = int(s->c.size()) - 1; n >= 2; --n)
        r = r * tau + double(n) * double(n - 1) * s->c[size_t(n)];
    return r;
}

std::vector<double> PiecewiseSeries::knots() const {
    std::vector<double> k;
    k.reserve(steps_.size() + 1);
    for (const auto& s : steps_) k.push_back(s.a);
    if (!steps_.empty()) k.push_back(steps_.back().a + steps_.back().h);
    return k;
}

PiecewiseSeries PiecewiseSeries::combine(const std::vector<const PiecewiseSeries*>& parts,
                                         const std::vector<Cplx>& weights) {
    std::vector<SeriesStep> out;
    if (parts.empty()) return PiecewiseSeries{};
    size_t nsteps = parts.front()->steps_.size();
    out.resize(nsteps);
    for (size_t i = 0; i < nsteps; ++i) {
        out[i].a = parts.front()->steps_[i].a;
        out[i].h = parts.front()->steps_[i].h;
        size_t len = 0;
        for (const auto* p : parts) len = std::max(len, p->steps_[i].c.size());
        out[i].c.assign(len, Cplx{0.0, 0.0});
        for (size_t j = 0; j < parts.size(); ++j) {
            const auto& c = parts[j]->steps_[i].c;
            for (size_t n = 0; n < c.size(); ++n) out[i].c[n] += weights[j] * c[n];
        }
    }
    return PiecewiseSeries(std::move(out));
}

// --------------------------------------------------------------- ExpSegment

Cplx ExpSegment::eval(double x) const {
    double d = x - x0;
    Cplx iu = Cplx{0.0, 1.0} * mu;
    return cp * std::exp(iu * d) + cm * std::exp(-iu * d) + part.eval(d);
}

Cplx ExpSegment::deriv(double x) const {
    double d = x - x0;
    Cplx iu = Cplx{0.0, 1.0} * mu;
    return iu * (cp * std::exp(iu * d) - cm * std::exp(-iu * d)) + part.eval_deriv(d);
}

// --------------------------------------------------------------- Trajectory

Trajectory::Trajectory(std::vector<ExpSegment> segments, std::optional<Cell> cell, double L)
    : segs_(std::move(segments)), cell_(std::move(cell)), L_(L) {
    std::sort(segs_.begin(), segs_.end(),
              [](const ExpSegment& a, const ExpSegment& b) { return a.x0 < b.x0; });
}

Cplx Trajectory::eval(double x) const {
    if (cell_ && std::abs(x) <= cell_->eps) return cell_->z.eval(x / cell_->eps);
    for (const auto& s : segs_)
        if (x >= s.x0 - 1e-15 && x <= s.x1 + 1e-15) return s.eval(x);
    return {0.0, 0.0};
}

Cplx Trajectory::deriv(double x) const {
    if (cell_ && std::abs(x) <= cell_->eps) return cell_->z.deriv(x / cell_->eps) / cell_->eps;
    for (const auto& s : segs_)
        if (x >= s.x0 - 1e-15 && x <= s.x1 + 1e-15) return s.deriv(x);
    return {0.0, 0.0};
}

std::vector<double> Trajectory::knots() const {
    std::set<double> s;
    for (const auto& seg : segs_) {
        s.insert(seg.x0);
        s.insert(seg.x1);
    }
    if (cell_) {
        for (double t : cell_->z.knots()) s.insert(t * cell_->eps);
    }
    return {s.begin(), s.end()};
}

double l2_diff(const Trajectory& a, const Trajectory& b) {
    double L = std::min(a.L(), b.L());
    std::vector<double> knots = a.knots();
    std::vector<double> kb = b.knots();
    knots.insert(knots.end(), kb.begin(), kb.end());
    double v = gauss_integrate_real(
        [&](double x) { return std::norm(a.eval(x) - b.eval(x)); }, -L, L, knots, 0.5);
    return std::sqrt(std::max(0.0, v));
}

double l2_norm(const Trajectory& a) {
    double v = gauss_integrate_real([&](double x) { return std::norm(a.eval(x)); }, -a.L(), a.L(),
                                    a.knots(), 0.5);
    return std::sqrt(std::max(0.0, v));
}

Cplx sqrt_upper(Cplx zeta) {
    Cplx mu = std::sqrt(zeta);
    if (mu.imag() <= 0.0) mu = -mu;
    return mu;
}

namespace {

/// Polynomial particular solution of (d^2/dx^2 + zeta) P = -H (finite sum).
Polynomial particular_poly(const Polynomial& H, Cplx zeta) {
    Polynomial out;
    Polynomial d = H;
    Cplx fac{-1.0, 0.0};
    int j = 0;
    while (!d.is_zero()) {
        out += (fac / std::pow(zeta, double(j + 1))) * d;
        d = d.derivative().derivative();
        fac = -fac;
        ++j;
    }
    return out;
}

}  // namespace

void propagate_exterior(std::vector<ExpSegment>& segs, const PiecewisePoly& h, Cplx mu, double xa,
                        double xb, bool data_at_left, Cplx& v, Cplx& d) {
    const double max_len = 2.0;
    Cplx zeta = mu * mu;
    Cplx iu = Cplx{0.0, 1.0} * mu;
    std::vector<double> cuts;
    cuts.push_back(xa);
    for (double b : h.breaks())
        if (b > xa && b < xb) cuts.push_back(b);
    cuts.push_back(xb);
    std::vector<double> grid;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        grid.push_back(cuts[i]);
        double len = cuts[i + 1] - cuts[i];
        int parts = std::max(1, int(std::ceil(len / max_len)));
        for (int j = 1; j < parts; ++j) grid.push_back(cuts[i] + len * double(j) / parts);
    }
    grid.push_back(xb);

    size_t n = grid.size() - 1;
    std::vector<ExpSegment> local(n);
    auto make_segment = [&](size_t i, Cplx val, Cplx der, bool at_left) {
        ExpSegment s;
        s.x0 = grid[i];
        s.x1 = grid[i + 1];
        s.mu = mu;
        double mid = 0.5 * (s.x0 + s.x1);
        // piece of h covering this segment, rebased to tau = x - x0
        Polynomial H;
        const auto& breaks = h.breaks();
        if (mid > breaks.front() && mid < breaks.back()) {
            auto it = std::upper_bound(breaks.begin(), breaks.end(), mid);
            size_t idx = size_t(it - breaks.begin()) - 1;
            idx = std::min(idx, h.pieces().size() - 1);
            H = h.pieces()[idx].shifted(s.x0);
        }
        s.part = particular_poly(H, zeta);
        double ref = at_left ? 0.0 : (s.x1 - s.x0);
        Cplx e = std::exp(iu * ref);
        Cplx pv = s.part.eval(ref), pd = s.part.eval_deriv(ref);
        Cplx u = val - pv, w = der - pd;
        // v = cp e + cm / e + pv,  d = iu (cp e - cm / e) + pd
        s.cp = 0.5 * (u + w / iu) / e;
        s.cm = 0.5 * (u - w / iu) * e;
        return s;
    };

    if (data_at_left) {
        for (size_t i = 0; i < n; ++i) {
            local[i] = make_segment(i, v, d, true);
            v = local[i].eval(grid[i + 1]);
            d = local[i].deriv(grid[i + 1]);
        }
    } else {
        for (size_t i = n; i-- > 0;) {
            local[i] = make_segment(i, v, d, false);
            v = local[i].eval(grid[i]);
            d = local[i].deriv(grid[i]);
        }
    }
    segs.insert(segs.end(), local.begin(), local.end());
}

}  // namespace pointlim
