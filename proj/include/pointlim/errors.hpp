#pragma once

#include <stdexcept>
#include <string>

namespace pointlim {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Profile construction / algebra
struct DegreeOverflow : Error { using Error::Error; };
struct InvalidProfile : Error { using Error::Error; };

// Triple / resonance
struct LinearDependence : Error { using Error::Error; };

// Classifier
struct UnstableClassification : Error { using Error::Error; };
struct DegenerateDenominator : Error { using Error::Error; };
struct NonRealSigmaPlus : Error { using Error::Error; };
struct ImpossibleBranch : Error { using Error::Error; };

// Cell solver / scattering / resolvent
struct SelfConsistencySingular : Error { using Error::Error; };
struct OdeToleranceNotMet : Error { using Error::Error; };
struct MatchingSingular : Error { using Error::Error; };
struct CouplingViolated : Error { using Error::Error; };
struct TruncationTooSmall : Error { using Error::Error; };
struct SeparatedHasNoTransfer : Error { using Error::Error; };

// Convergence
struct InsufficientPoints : Error { using Error::Error; };

}  // namespace pointlim
