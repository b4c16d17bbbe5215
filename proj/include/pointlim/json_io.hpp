#pragma once

#include <nlohmann/json.hpp>

#include "pointlim/classifier.hpp"
#include "pointlim/convergence.hpp"
#include "pointlim/resonance.hpp"

namespace pointlim {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Numbers in configs may be JSON numbers, decimal strings, or exact
/// rational strings "p/q" (converted to double at parse time).
double parse_number(const Json& v);

/// Profile literal: {"pieces": [{"lo", "hi", "coeffs": [[re, im], ...]}, ...]}
/// or one of the builtin families {"const": c}, {"poly": [c0, c1, ...]},
/// {"builtin": "bump_even" | "bump_odd"}; coefficients accept [re, im] pairs
/// or bare numbers/rational strings.
Profile profile_from_json(const Json& v);
/// Raw parse without the [-1, 1] support restriction (resolvent data h).
PiecewisePoly pw_from_json(const Json& v);
Json profile_to_json(const Profile& p);

/// Triple literal {"f": ..., "g": ..., "q": ...} (q optional, defaults to 0)
/// or {"fixture": "name", ...params}.  Out-of-window supports are rescaled to
/// [-1, 1] via the eps-scaling equivalence; *rescale_factor reports r.
Triple triple_from_json(const Json& v, double* rescale_factor = nullptr,
                        std::string* note = nullptr);

Json to_json(const LimitInteraction& li);
LimitInteraction interaction_from_json(const Json& v);

Json to_json(const InvariantSet& inv);
Json to_json(const HalfBoundStateReport& rep, int sample_points = 201);
Json to_json(const ConvergenceReport& rep);

}  // namespace pointlim
