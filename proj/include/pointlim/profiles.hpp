#pragma once

#include <complex>
#include <vector>

#include "pointlim/errors.hpp"

namespace pointlim {

using Cplx = std::complex<double>;

/// Dense complex polynomial, coefficients in ascending powers of x.
class Polynomial {
  public:
    Polynomial() = default;
    explicit Polynomial(std::vector<Cplx> coeffs);
    static Polynomial constant(Cplx c);

    /// -1 for the zero polynomial.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<Cplx>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }

    Cplx eval(double x) const;
    Cplx eval_deriv(double x) const;

    Polynomial derivative() const;
    Polynomial antiderivative() const;  // vanishing constant term
    Polynomial conjugated() const;      // conj(p(x)) for real x
    Polynomial shifted(double dx) const;     // x -> x + dx
    Polynomial scaled_arg(double s) const;   // x -> s*x

    Cplx integral(double lo, double hi) const;

    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    Polynomial& operator*=(Cplx s);
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, Cplx s) { return a *= s; }
    friend Polynomial operator*(Cplx s, Polynomial a) { return a *= s; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

  private:
    void trim();
    std::vector<Cplx> c_;  // ascending powers; empty == 0
};

/// Piecewise polynomial with compact support [breaks.front(), breaks.back()];
/// identically zero outside.  Pieces are stored in global coordinates.  No
/// degree cap: internal products and antiderivatives are free to grow; the
/// user-facing Profile enforces the cap at construction.
class PiecewisePoly {
  public:
    PiecewisePoly();  // zero function on [-1, 1]
    PiecewisePoly(std::vector<double> breaks, std::vector<Polynomial> pieces);

    const std::vector<double>& breaks() const { return breaks_; }
    const std::vector<Polynomial>& pieces() const { return pieces_; }
    double support_lo() const { return breaks_.front(); }
    double support_hi() const { return breaks_.back(); }
    int max_degree() const;
    bool is_zero() const;

    Cplx eval(double x) const;        // exact 0 outside the support
    Cplx eval_deriv(double x) const;

    PiecewisePoly derivative() const;
    PiecewisePoly conjugated() const;
    /// Refine to a given breakpoint grid covering the support.
    PiecewisePoly refined(const std::vector<double>& grid) const;

    /// Running antiderivative from support_lo with value 0 there; the
    /// polynomial tail beyond support_hi is reported separately:
    /// value(x) = tail_const + tail_slope * x for x >= support_hi.
    PiecewisePoly antiderivative_from_left(Cplx* tail_const, Cplx* tail_slope) const;

    /// Integral over the full support (Kahan-compensated across pieces).
    Cplx integral() const;
    Cplx integral(double lo, double hi) const;

    /// Sampled sup norm over [lo, hi] (dense per-piece sampling).
    double sup_norm(double lo, double hi) const;

    PiecewisePoly& operator*=(Cplx s);
    friend PiecewisePoly operator+(const PiecewisePoly& a, const PiecewisePoly& b);
    friend PiecewisePoly operator-(const PiecewisePoly& a, const PiecewisePoly& b);
    friend PiecewisePoly operator*(const PiecewisePoly& a, const PiecewisePoly& b);
    friend PiecewisePoly operator*(PiecewisePoly a, Cplx s) { return a *= s; }
    friend PiecewisePoly operator*(Cplx s, PiecewisePoly a) { return a *= s; }

  private:
    int piece_index(double x) const;
    std::vector<double> breaks_;
    std::vector<Polynomial> pieces_;
};

/// Compactly supported piecewise-polynomial function on [-1, 1]: the
/// representation of f, g, q and every derived integrand.  Construction
/// enforces support in [-1, 1], strictly increasing breakpoints and the
/// per-piece degree cap.
class Profile {
  public:
    static constexpr int kMaxDegree = 16;

    Profile();  // zero profile
    explicit Profile(PiecewisePoly pw);
    Profile(std::vector<double> breaks, std::vector<Polynomial> pieces);

    static Profile constant(Cplx c);                  // c on [-1, 1]
    static Profile poly(std::vector<Cplx> coeffs);    // polynomial on [-1, 1]
    static Profile bump_even();  // (sqrt(15)/4)(1 - x^2), unit L2 norm
    static Profile bump_odd();   // (sqrt(105)/4) x (1 - x^2), unit L2 norm

    const PiecewisePoly& pw() const { return pw_; }
    Cplx eval(double x) const { return pw_.eval(x); }
    bool is_zero() const { return pw_.is_zero(); }
    /// Largest |imaginary coefficient| over all pieces.
    double max_imag_coeff() const;

    friend Profile operator+(const Profile& a, const Profile& b);
    friend Profile operator*(Profile a, Cplx s);
    friend Profile operator*(Cplx s, Profile a);

  private:
    PiecewisePoly pw_;
};

/// A profile-like function with constant/linear behaviour outside [-1, 1]:
/// antiderivatives, omega and sigma live here.  Conventions:
///   x <  -1 : value = left_const (0 for antiderivatives of supported data)
///   x in I  : value = core(x)
///   x >  +1 : value = tail_const + tail_slope * x
/// Continuity: core(-1) = left_const and core(1) = tail_const + tail_slope.
struct TailedProfile {
    PiecewisePoly core;  // covers [-1, 1]
    Cplx left_const{0.0, 0.0};
    Cplx tail_const{0.0, 0.0};
    Cplx tail_slope{0.0, 0.0};

    Cplx eval(double x) const;
    Cplx eval_deriv(double x) const;

    TailedProfile& operator+=(const TailedProfile& o);
    TailedProfile& operator*=(Cplx s);
    friend TailedProfile operator+(TailedProfile a, const TailedProfile& b) { return a += b; }
    friend TailedProfile operator*(TailedProfile a, Cplx s) { return a *= s; }
    friend TailedProfile operator*(Cplx s, TailedProfile a) { return a *= s; }
    friend TailedProfile operator-(const TailedProfile& a, const TailedProfile& b);

    static TailedProfile constant(Cplx c);  // c on the whole line
};

/// moment(p, k) = ∫ x^k p(x) dx, k in {0, 1}; exact closed form per piece.
Cplx moment(const Profile& p, int order);

/// First / second antiderivative as a TailedProfile:
///   order 1: x -> ∫_{-inf}^x p
///   order 2: x -> ∫_{-inf}^x (x - s) p(s) ds, tail p0*x - p1.
/// Throws DegreeOverflow when the result would exceed Profile::kMaxDegree.
TailedProfile antiderivative(const Profile& p, int order);

/// Same on raw piecewise data without the degree cap (internal workhorse).
TailedProfile antiderivative_pw(const PiecewisePoly& p, int order);

/// Inner products over I = [-1, 1]; first slot conjugated.
Cplx inner(const PiecewisePoly& u, const PiecewisePoly& v);
Cplx inner(const Profile& u, const Profile& v);
Cplx inner(const Profile& u, const TailedProfile& v);
Cplx inner(const TailedProfile& u, const Profile& v);
Cplx inner(const TailedProfile& u, const TailedProfile& v);

double l2norm(const Profile& u);
double l2norm(const TailedProfile& u);
double l2norm_I(const PiecewisePoly& u);

/// Restriction of a tailed profile to I as a plain piecewise polynomial.
const PiecewisePoly& core_on_I(const TailedProfile& u);

/// Kahan-compensated running sum.
class KahanSum {
  public:
    void add(double x) {
        double y = x - comp_;
        double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Support normalization of a raw triple supported in [-r, r]: the substitution
/// x -> x/r combined with the eps-scaling equivalence of the shrinking family,
///   f~(t) = r^{3/2} f(rt),  g~(t) = r^{3/2} g(rt),  q~(t) = r q(rt),
/// which leaves the classified limit invariant.
struct NormalizedTriple {
    Profile f, g, q;
    double factor;  // r
};
NormalizedTriple normalize_support(const PiecewisePoly& f, const PiecewisePoly& g,
                                   const PiecewisePoly& q);

}  // namespace pointlim
