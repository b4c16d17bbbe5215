#pragma once

// Test-side integration oracle, independent of the library's closed-form
// piece integration: composite 7-point Gauss-Legendre on many panels with
// hard-coded nodes.  Good to ~1e-14 relative for the smooth integrands here.

#include <cmath>
#include <complex>
#include <functional>

namespace oracle {

using Cplx = std::complex<double>;

inline Cplx integrate(const std::function<Cplx(double)>& f, double a, double b,
                      int panels = 64) {
    static const double xs[7] = {-0.9491079123427585, -0.7415311855993945,
                                 -0.4058451513773972, 0.0,
                                 0.4058451513773972,  0.7415311855993945,
                                 0.9491079123427585};
    static const double ws[7] = {0.1294849661688697, 0.2797053914892766,
                                 0.3818300505051189, 0.4179591836734694,
                                 0.3818300505051189, 0.2797053914892766,
                                 0.1294849661688697};
    Cplx total{0.0, 0.0};
    for (int p = 0; p < panels; ++p) {
        double lo = a + (b - a) * double(p) / panels;
        double hi = a + (b - a) * double(p + 1) / panels;
        double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        for (int j = 0; j < 7; ++j) total += f(mid + half * xs[j]) * (half * ws[j]);
    }
    return total;
}

inline double integrate_real(const std::function<double(double)>& f, double a, double b,
                             int panels = 64) {
    return integrate([&](double x) { return Cplx{f(x), 0.0}; }, a, b, panels).real();
}

}  // namespace oracle
