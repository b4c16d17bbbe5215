#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "pointlim/classifier.hpp"
#include "pointlim/resonance.hpp"

namespace pointlim {

/// A named triple realizing one leaf of the bifurcation graph.  The tuned
/// members are constructed by deterministic root finds / linear solves at
/// registry time, so acceptance runs are config-only.
struct Fixture {
    std::string name;
    Triple triple;
    CaseTag expected;
    std::string note;
};

const std::vector<std::string>& fixture_names();
bool is_fixture(const std::string& name);
Fixture make_fixture(const std::string& name, const std::map<std::string, double>& params = {});

/// Bisection/secant hybrid on a bracketed root; deterministic.
double find_root_1d(const std::function<double(double)>& fn, double lo, double hi);

}  // namespace pointlim
