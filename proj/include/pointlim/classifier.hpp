#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>

#include "pointlim/resonance.hpp"

namespace pointlim {

enum class CaseTag { A1, A2, A3, B1, B2, B3 };
const char* to_string(CaseTag tag);

struct BoundaryCondition {
    enum Kind { Dirichlet, Robin } kind = Dirichlet;
    double theta = 0.0;  // Neumann = Robin(0)
    static BoundaryCondition dirichlet() { return {Dirichlet, 0.0}; }
    static BoundaryCondition robin(double theta) { return {Robin, theta}; }
    bool operator==(const BoundaryCondition&) const = default;
};

/// The classified norm-resolvent limit: either connected interface conditions
/// (v+, v+') = e^{i phase} C (v-, v-') with real C, det C = 1, or separated
/// Dirichlet/Robin conditions per half-line.
struct LimitInteraction {
    enum Kind { Connected, Separated } kind = Connected;
    CaseTag tag = CaseTag::B3;
    // connected data
    double phase = 0.0;            // in (-pi, pi]
    Eigen::Matrix2d coupling = Eigen::Matrix2d::Identity();
    // separated data
    BoundaryCondition left, right;

    std::map<std::string, double> margins;  // branch quantity -> |x|/threshold
    bool unstable = false;                  // any margin within (0.1, 10]

    static LimitInteraction connected(CaseTag tag, double phase, const Eigen::Matrix2d& c);
    static LimitInteraction separated(CaseTag tag, BoundaryCondition l, BoundaryCondition r);
};

/// Walk the bifurcation graph of the limit behaviour.  In strict mode an
/// UnstableClassification is raised when any branch quantity sits within 10x
/// of its zero threshold; the default permissive mode only records margins.
LimitInteraction classify(const Triple& t, const Tolerances& tol = {}, bool strict = false);
LimitInteraction classify(const InvariantSet& inv, const Tolerances& tol = {}, bool strict = false);

/// Limit of the bare eps^{-1} q(x/eps) family (f = g = 0): the delta
/// interaction ((1, 0), (a0, 1)) of strength a0 = ∫q.
LimitInteraction delta_limit(double a0);

/// Case matrices/parameters, exposed for direct use on an InvariantSet.
std::pair<double, Eigen::Matrix2d> matrix_A1(const InvariantSet& inv);
std::pair<double, Eigen::Matrix2d> matrix_A2(const InvariantSet& inv);
std::pair<BoundaryCondition, BoundaryCondition> separated_B1(const InvariantSet& inv);
std::pair<BoundaryCondition, BoundaryCondition> separated_B2(const InvariantSet& inv,
                                                             const Tolerances& tol = {});

/// Fold the sign ambiguity (phase, C) ~ (phase + pi, -C) into a canonical
/// representative: first nonzero matrix entry positive, phase in (-pi, pi].
LimitInteraction canonical(const LimitInteraction& li);

/// Principal-branch wrap into (-pi, pi].
double wrap_phase(double phi);

}  // namespace pointlim
