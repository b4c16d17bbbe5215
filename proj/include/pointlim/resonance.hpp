#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pointlim/profiles.hpp"

namespace pointlim {

/// Relative/absolute thresholds for the zero tests that drive the case logic.
/// A quantity x with natural scale s counts as zero iff |x| <= rel*s + abs.
struct Tolerances {
    double rel = 1e-9;
    double abs = 1e-12;
    bool is_zero(Cplx x, double scale) const { return std::abs(x) <= rel * scale + abs; }
    /// |x| / zero-threshold; the classifier records these as margins.
    double margin(Cplx x, double scale) const { return std::abs(x) / (rel * scale + abs); }
};

/// The perturbation data (f, g, q).  q must be real-valued; f and g must be
/// linearly independent in L2 (Gram determinant test), except that the fully
/// trivial pair f = g = 0 is admitted so the solvers can handle the plain
/// delta-potential family.  Resonance and classification reject that case.
struct Triple {
    Triple(Profile f_in, Profile g_in, Profile q_in);
    Profile f, g, q;
    bool trivial_pair() const { return f.is_zero() && g.is_zero(); }
};

/// Every scalar/functional quantity of the theory computed from a triple.
/// omega, a1, a2 are meaningful only in the zero-mean case f0 = g0 = 0
/// (zero_mean flag); they are still populated with the raw formula values.
struct InvariantSet {
    Cplx f0, g0, f1, g1;
    double pi_val = 0.0;       // ||f^(-1)|| ||g^(-1)|| - |<f^(-1),g^(-1)> + 1|
    double theta_phase = 0.0;  // arg(<f^(-1),g^(-1)> + 1)
    double lambda_val = 0.0;   // ||g0 f^(-1) - f0 g^(-1)||^2 - 2 Re(f0 conj(g0))
    TailedProfile omega;
    Cplx kappa;                // omega(1)
    TailedProfile sigma;       // the closed-form expression (identities live here)
    Cplx sigma_minus, sigma_plus;
    double sigma_star = 0.0;   // ∫ q |sigma|^2
    // The actual kernel element of the half-bound-state system when
    // lambda = 0 and f0 g0 != 0.  The closed form above solves the system
    // only when the first two rows of the lemma matrix are dependent; the
    // corrected constant below always does.  Both agree in that situation.
    TailedProfile sigma_state;
    Cplx sigma_state_minus, sigma_state_plus;
    double sigma_state_star = 0.0;
    double a0 = 0.0;           // ∫ q
    Cplx a1;                   // ∫ q omega
    double a2 = 0.0;           // ∫ q |omega|^2
    bool zero_mean = false;    // applicability flag for omega/a1/a2

    // scales used by the zero tests (natural sizes of the tested quantities)
    double scale_pi = 1.0, scale_lambda = 1.0, scale_kappa = 1.0;
    double scale_mean_f = 1.0, scale_mean_g = 1.0;
    double scale_a1 = 1.0, scale_a2 = 1.0;
    double scale_sigma = 1.0;
    double q_l1 = 0.0, omega_sup = 0.0;
    bool real_data = false;  // f, g have real coefficients (q is real always)

    std::vector<std::string> warnings;  // near-boundary notes
};

InvariantSet compute_invariants(const Triple& t, const Tolerances& tol = {});

enum class ResonanceKind { None, ConstOnly, Sigma, Double };

const char* to_string(ResonanceKind k);

/// Half-bound states of B = -d^2/dx^2 + (g,.)f + (f,.)g, reported with the
/// residual max_u ||-u'' + Qu|| / state over the listed states.
struct HalfBoundStateReport {
    ResonanceKind kind = ResonanceKind::None;
    std::vector<TailedProfile> states;
    double residual = 0.0;
};

HalfBoundStateReport half_bound_states(const Triple& t, const Tolerances& tol = {});

/// The 3x3 matrix of the half-bound-state linear system; det A equals lambda.
struct LemmaMatrix {
    Eigen::Matrix3cd a;
    Cplx det;
};

LemmaMatrix lemma_matrix(const Triple& t);

/// Real scale s != 0 such that (f, s*g) is resonant (lambda = 0), when the
/// quadratic s^2 ||g0 f^(-1) - f0 g^(-1)||^2 = 2 s Re(f0 conj(g0)) admits one.
std::optional<double> tune_resonance(const Profile& f, const Profile& g);

/// L2 residual of -u'' + (g,u) f + (f,u) g over I for a candidate state.
double neumann_residual(const Triple& t, const TailedProfile& u);

}  // namespace pointlim
