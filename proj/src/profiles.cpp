#include "pointlim/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace pointlim {

namespace {

constexpr double kCoeffZeroTol = 0.0;  // exact trim only

std::vector<double> merge_breaks(const std::vector<double>& a, const std::vector<double>& b,
                                 double lo, double hi) {
    std::set<double> s;
    s.insert(lo);
    s.insert(hi);
    for (double x : a)
        if (x > lo && x < hi) s.insert(x);
    for (double x : b)
        if (x > lo && x < hi) s.insert(x);
    return {s.begin(), s.end()};
}

}  // namespace

// ---------------------------------------------------------------- Polynomial

Polynomial::Polynomial(std::vector<Cplx> coeffs) : c_(std::move(coeffs)) { trim(); }

Polynomial Polynomial::constant(Cplx c) { return Polynomial(std::vector<Cplx>{c}); }

void Polynomial::trim() {
    while (!c_.empty() && std::abs(c_.back()) <= kCoeffZeroTol) c_.pop_back();
}

Cplx Polynomial::eval(double x) const {
    Cplx r{0.0, 0.0};
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
    return r;
}

Cplx Polynomial::eval_deriv(double x) const {
    Cplx r{0.0, 0.0};
    for (int n = degree(); n >= 1; --n) r = r * x + double(n) * c_[size_t(n)];
    return r;
}

Polynomial Polynomial::derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<Cplx> d(c_.size() - 1);
    for (size_t n = 1; n < c_.size(); ++n) d[n - 1] = double(n) * c_[n];
    return Polynomial(std::move(d));
}

Polynomial Polynomial::antiderivative() const {
    if (c_.empty()) return {};
    std::vector<Cplx> d(c_.size() + 1, Cplx{0.0, 0.0});
    for (size_t n = 0; n < c_.size(); ++n) d[n + 1] = c_[n] / double(n + 1);
    return Polynomial(std::move(d));
}

Polynomial Polynomial::conjugated() const {
    std::vector<Cplx> d(c_.size());
    for (size_t n = 0; n < c_.size(); ++n) d[n] = std::conj(c_[n]);
    return Polynomial(std::move(d));
}

Polynomial Polynomial::shifted(double dx) const {
    // p(x + dx) via Horner: result <- result*(x + dx) + c_n
    if (c_.empty() || dx == 0.0) return *this;
    std::vector<Cplx> d;
    d.reserve(c_.size());
    for (int n = degree(); n >= 0; --n) {
        d.insert(d.begin(), Cplx{0.0, 0.0});
        for (size_t j = 0; j + 1 < d.size(); ++j) d[j] += dx * d[j + 1];
        d[0] += c_[size_t(n)];
    }
    return Polynomial(std::move(d));
}

Polynomial Polynomial::scaled_arg(double s) const {
    std::vector<Cplx> d(c_.size());
    double p = 1.0;
    for (size_t n = 0; n < c_.size(); ++n) {
        d[n] = c_[n] * p;
        p *= s;
    }
    return Polynomial(std::move(d));
}

Cplx Polynomial::integral(double lo, double hi) const {
    Polynomial a = antiderivative();
    return a.eval(hi) - a.eval(lo);
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Cplx{0.0, 0.0});
    for (size_t n = 0; n < o.c_.size(); ++n) c_[n] += o.c_[n];
    trim();
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Cplx{0.0, 0.0});
    for (size_t n = 0; n < o.c_.size(); ++n) c_[n] -= o.c_[n];
    trim();
    return *this;
}

Polynomial& Polynomial::operator*=(Cplx s) {
    if (s == Cplx{0.0, 0.0}) {
        c_.clear();
        return *this;
    }
    for (auto& v : c_) v *= s;
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.c_.empty() || b.c_.empty()) return {};
    std::vector<Cplx> d(a.c_.size() + b.c_.size() - 1, Cplx{0.0, 0.0});
    for (size_t i = 0; i < a.c_.size(); ++i)
        for (size_t j = 0; j < b.c_.size(); ++j) d[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(d));
}

// ------------------------------------------------------------- PiecewisePoly

PiecewisePoly::PiecewisePoly() : breaks_{-1.0, 1.0}, pieces_{Polynomial{}} {}

PiecewisePoly::PiecewisePoly(std::vector<double> breaks, std::vector<Polynomial> pieces)
    : breaks_(std::move(breaks)), pieces_(std::move(pieces)) {
    if (breaks_.size() < 2 || pieces_.size() + 1 != breaks_.size())
        throw InvalidProfile("piecewise polynomial needs n+1 breakpoints for n pieces");
    for (size_t i = 0; i + 1 < breaks_.size(); ++i)
        if (!(breaks_[i] < breaks_[i + 1]))
            throw InvalidProfile("breakpoints must be strictly increasing");
}

int PiecewisePoly::max_degree() const {
    int d = -1;
    for (const auto& p : pieces_) d = std::max(d, p.degree());
    return d;
}

bool PiecewisePoly::is_zero() const {
    return std::all_of(pieces_.begin(), pieces_.end(),
                       [](const Polynomial& p) { return p.is_zero(); });
}

int PiecewisePoly::piece_index(double x) const {
    if (x < breaks_.front() || x > breaks_.back()) return -1;
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
    int i = int(it - breaks_.begin()) - 1;
    return std::min(i, int(pieces_.size()) - 1);
}

Cplx PiecewisePoly::eval(double x) const {
    int i = piece_index(x);
    return i < 0 ? Cplx{0.0, 0.0} : pieces_[size_t(i)].eval(x);
}

Cplx PiecewisePoly::eval_deriv(double x) const {
    int i = piece_index(x);
    return i < 0 ? Cplx{0.0, 0.0} : pieces_[size_t(i)].eval_deriv(x);
}

PiecewisePoly PiecewisePoly::derivative() const {
    std::vector<Polynomial> d;
    d.reserve(pieces_.size());
    for (const auto& p : pieces_) d.push_back(p.derivative());
    return PiecewisePoly(breaks_, std::move(d));
}

PiecewisePoly PiecewisePoly::conjugated() const {
    std::vector<Polynomial> d;
    d.reserve(pieces_.size());
    for (const auto& p : pieces_) d.push_back(p.conjugated());
    return PiecewisePoly(breaks_, std::move(d));
}

PiecewisePoly PiecewisePoly::refined(const std::vector<double>& grid) const {
    std::vector<Polynomial> d;
    d.reserve(grid.size() - 1);
    for (size_t i = 0; i + 1 < grid.size(); ++i) {
        double mid = 0.5 * (grid[i] + grid[i + 1]);
        int j = piece_index(mid);
        d.push_back(j < 0 ? Polynomial{} : pieces_[size_t(j)]);
    }
    return PiecewisePoly(grid, std::move(d));
}

PiecewisePoly PiecewisePoly::antiderivative_from_left(Cplx* tail_const, Cplx* tail_slope) const {
    std::vector<Polynomial> d;
    d.reserve(pieces_.size());
    Cplx running{0.0, 0.0};
    for (size_t i = 0; i < pieces_.size(); ++i) {
        Polynomial a = pieces_[i].antiderivative();
        Cplx c0 = running - a.eval(breaks_[i]);
        a += Polynomial::constant(c0);
        running = a.eval(breaks_[i + 1]);
        d.push_back(std::move(a));
    }
    if (tail_const) *tail_const = running;
    if (tail_slope) *tail_slope = Cplx{0.0, 0.0};
    return PiecewisePoly(breaks_, std::move(d));
}

Cplx PiecewisePoly::integral() const { return integral(breaks_.front(), breaks_.back()); }

Cplx PiecewisePoly::integral(double lo, double hi) const {
    lo = std::max(lo, breaks_.front());
    hi = std::min(hi, breaks_.back());
    if (lo >= hi) return {0.0, 0.0};
    KahanSum re, im;
    for (size_t i = 0; i < pieces_.size(); ++i) {
        double a = std::max(lo, breaks_[i]);
        double b = std::min(hi, breaks_[i + 1]);
        if (a >= b) continue;
        Cplx v = pieces_[i].integral(a, b);
        re.add(v.real());
        im.add(v.imag());
    }
    return {re.value(), im.value()};
}

double PiecewisePoly::sup_norm(double lo, double hi) const {
    double m = 0.0;
    for (size_t i = 0; i < pieces_.size(); ++i) {
        double a = std::max(lo, breaks_[i]);
        double b = std::min(hi, breaks_[i + 1]);
        if (a > b) continue;
        int n = 4 * std::max(1, pieces_[i].degree()) + 1;
        for (int j = 0; j <= n; ++j) {
            double x = a + (b - a) * double(j) / double(n);
            m = std::max(m, std::abs(pieces_[i].eval(x)));
        }
    }
    return m;
}

PiecewisePoly& PiecewisePoly::operator*=(Cplx s) {
    for (auto& p : pieces_) p *= s;
    return *this;
}

namespace {

PiecewisePoly combine(const PiecewisePoly& a, const PiecewisePoly& b, bool subtract,
                      bool multiply) {
    double lo = multiply ? std::max(a.support_lo(), b.support_lo())
                         : std::min(a.support_lo(), b.support_lo());
    double hi = multiply ? std::min(a.support_hi(), b.support_hi())
                         : std::max(a.support_hi(), b.support_hi());
    if (lo >= hi) return PiecewisePoly({-1.0, 1.0}, {Polynomial{}});
    std::vector<double> grid = merge_breaks(a.breaks(), b.breaks(), lo, hi);
    PiecewisePoly ra = a.refined(grid), rb = b.refined(grid);
    std::vector<Polynomial> d(grid.size() - 1);
    for (size_t i = 0; i + 1 < grid.size(); ++i) {
        if (multiply)
            d[i] = ra.pieces()[i] * rb.pieces()[i];
        else
            d[i] = subtract ? ra.pieces()[i] - rb.pieces()[i] : ra.pieces()[i] + rb.pieces()[i];
    }
    return PiecewisePoly(std::move(grid), std::move(d));
}

}  // namespace

PiecewisePoly operator+(const PiecewisePoly& a, const PiecewisePoly& b) {
    return combine(a, b, false, false);
}
PiecewisePoly operator-(const PiecewisePoly& a, const PiecewisePoly& b) {
    return combine(a, b, true, false);
}
PiecewisePoly operator*(const PiecewisePoly& a, const PiecewisePoly& b) {
    return combine(a, b, false, true);
}

// ------------------------------------------------------------------- Profile

Profile::Profile() : pw_() {}

Profile::Profile(PiecewisePoly pw) : pw_(std::move(pw)) {
    if (pw_.support_lo() < -1.0 - 1e-15 || pw_.support_hi() > 1.0 + 1e-15)
        throw InvalidProfile("profile support must lie in [-1, 1]");
    if (pw_.max_degree() > kMaxDegree)
        throw DegreeOverflow("profile piece degree exceeds the cap of 16");
}

Profile::Profile(std::vector<double> breaks, std::vector<Polynomial> pieces)
    : Profile(PiecewisePoly(std::move(breaks), std::move(pieces))) {}

Profile Profile::constant(Cplx c) {
    return Profile({-1.0, 1.0}, {Polynomial::constant(c)});
}

Profile Profile::poly(std::vector<Cplx> coeffs) {
    return Profile({-1.0, 1.0}, {Polynomial(std::move(coeffs))});
}

Profile Profile::bump_even() {
    double s = std::sqrt(15.0) / 4.0;
    return Profile::poly({Cplx{s, 0.0}, Cplx{0.0, 0.0}, Cplx{-s, 0.0}});
}

Profile Profile::bump_odd() {
    double s = std::sqrt(105.0) / 4.0;
    return Profile::poly({Cplx{0.0, 0.0}, Cplx{s, 0.0}, Cplx{0.0, 0.0}, Cplx{-s, 0.0}});
}

double Profile::max_imag_coeff() const {
    double m = 0.0;
    for (const auto& p : pw_.pieces())
        for (const auto& c : p.coeffs()) m = std::max(m, std::abs(c.imag()));
    return m;
}

Profile operator+(const Profile& a, const Profile& b) { return Profile(a.pw() + b.pw()); }
Profile operator*(Profile a, Cplx s) {
    PiecewisePoly pw = a.pw();
    pw *= s;
    return Profile(std::move(pw));
}
Profile operator*(Cplx s, Profile a) { return std::move(a) * s; }

// ------------------------------------------------------------- TailedProfile

Cplx TailedProfile::eval(double x) const {
    if (x < -1.0) return left_const;
    if (x > 1.0) return tail_const + tail_slope * x;
    return core.eval(x);
}

Cplx TailedProfile::eval_deriv(double x) const {
    if (x < -1.0) return {0.0, 0.0};
    if (x > 1.0) return tail_slope;
    return core.eval_deriv(x);
}

TailedProfile& TailedProfile::operator+=(const TailedProfile& o) {
    core = core + o.core;
    left_const += o.left_const;
    tail_const += o.tail_const;
    tail_slope += o.tail_slope;
    return *this;
}

TailedProfile& TailedProfile::operator*=(Cplx s) {
    core *= s;
    left_const *= s;
    tail_const *= s;
    tail_slope *= s;
    return *this;
}

TailedProfile operator-(const TailedProfile& a, const TailedProfile& b) {
    TailedProfile r = b;
    r *= Cplx{-1.0, 0.0};
    r += a;
    return r;
}

TailedProfile TailedProfile::constant(Cplx c) {
    TailedProfile r;
    r.core = PiecewisePoly({-1.0, 1.0}, {Polynomial::constant(c)});
    r.left_const = c;
    r.tail_const = c;
    r.tail_slope = Cplx{0.0, 0.0};
    return r;
}

// ------------------------------------------------------------------ free ops

Cplx moment(const Profile& p, int order) {
    if (order != 0 && order != 1) throw Error("moment order must be 0 or 1");
    if (order == 0) return p.pw().integral();
    Polynomial x({Cplx{0.0, 0.0}, Cplx{1.0, 0.0}});
    PiecewisePoly weighted(p.pw().breaks(), [&] {
        std::vector<Polynomial> d;
        d.reserve(p.pw().pieces().size());
        for (const auto& q : p.pw().pieces()) d.push_back(q * x);
        return d;
    }());
    return weighted.integral();
}

namespace {

/// Pad a piecewise polynomial so the breakpoints cover exactly [-1, 1],
/// extending by given constant/linear polynomials on either side.
PiecewisePoly pad_to_I(const PiecewisePoly& pw, const Polynomial& left, const Polynomial& right) {
    std::vector<double> breaks = pw.breaks();
    std::vector<Polynomial> pieces = pw.pieces();
    if (breaks.front() > -1.0) {
        breaks.insert(breaks.begin(), -1.0);
        pieces.insert(pieces.begin(), left);
    } else {
        breaks.front() = -1.0;
    }
    if (breaks.back() < 1.0) {
        breaks.push_back(1.0);
        pieces.push_back(right);
    } else {
        breaks.back() = 1.0;
    }
    return PiecewisePoly(std::move(breaks), std::move(pieces));
}

}  // namespace

TailedProfile antiderivative(const Profile& p, int order) {
    // the order-2 antiderivative of a degree-16 piece overflows the cap
    if (p.pw().max_degree() + order > Profile::kMaxDegree + 1)
        throw DegreeOverflow("antiderivative degree would exceed the representable cap");
    return antiderivative_pw(p.pw(), order);
}

TailedProfile antiderivative_pw(const PiecewisePoly& p, int order) {
    if (order != 1 && order != 2) throw Error("antiderivative order must be 1 or 2");

    Cplx tc, ts;
    PiecewisePoly a1 = p.antiderivative_from_left(&tc, &ts);
    TailedProfile r;
    if (order == 1) {
        // tail constant = p0, slope 0; values before the support are 0
        r.core = pad_to_I(a1, Polynomial{}, Polynomial::constant(tc));
        r.left_const = Cplx{0.0, 0.0};
        r.tail_const = tc;
        r.tail_slope = Cplx{0.0, 0.0};
        return r;
    }
    // Second antiderivative: integrate once more; beyond the support the first
    // antiderivative is the constant p0, so the tail is p0*x - p1.
    Cplx p0 = tc;
    Cplx junk;
    PiecewisePoly a2 = a1.antiderivative_from_left(&junk, &junk);
    double hi = a2.breaks().back();
    Cplx val_hi = a2.eval(hi);
    // linear continuation through (hi, val_hi) with slope p0: p0*x + (val_hi - p0*hi)
    Polynomial right({val_hi - p0 * hi, p0});
    r.core = pad_to_I(a2, Polynomial{}, right);
    r.left_const = Cplx{0.0, 0.0};
    // tail written as tail_const + tail_slope*x; equals p0*x - p1 analytically
    r.tail_slope = p0;
    r.tail_const = val_hi - p0 * hi;
    return r;
}

Cplx inner(const PiecewisePoly& u, const PiecewisePoly& v) {
    PiecewisePoly prod = u.conjugated() * v;
    return prod.integral(-1.0, 1.0);
}

Cplx inner(const Profile& u, const Profile& v) { return inner(u.pw(), v.pw()); }
Cplx inner(const Profile& u, const TailedProfile& v) { return inner(u.pw(), v.core); }
Cplx inner(const TailedProfile& u, const Profile& v) { return inner(u.core, v.pw()); }
Cplx inner(const TailedProfile& u, const TailedProfile& v) { return inner(u.core, v.core); }

double l2norm_I(const PiecewisePoly& u) {
    Cplx n2 = inner(u, u);
    return std::sqrt(std::max(0.0, n2.real()));
}

double l2norm(const Profile& u) { return l2norm_I(u.pw()); }
double l2norm(const TailedProfile& u) { return l2norm_I(u.core); }

const PiecewisePoly& core_on_I(const TailedProfile& u) { return u.core; }

NormalizedTriple normalize_support(const PiecewisePoly& f, const PiecewisePoly& g,
                                   const PiecewisePoly& q) {
    double r = 0.0;
    for (const PiecewisePoly* p : {&f, &g, &q})
        r = std::max({r, std::abs(p->support_lo()), std::abs(p->support_hi())});
    if (r <= 1.0) {
        return {Profile(f), Profile(g), Profile(q), 1.0};
    }
    auto rescale = [r](const PiecewisePoly& p, double amp) {
        std::vector<double> breaks = p.breaks();
        for (auto& x : breaks) x /= r;
        std::vector<Polynomial> pieces;
        pieces.reserve(p.pieces().size());
        for (const auto& poly : p.pieces()) pieces.push_back(amp * poly.scaled_arg(r));
        return PiecewisePoly(std::move(breaks), std::move(pieces));
    };
    double amp_fg = std::pow(r, 1.5);
    return {Profile(rescale(f, amp_fg)), Profile(rescale(g, amp_fg)), Profile(rescale(q, r)), r};
}

}  // namespace pointlim
