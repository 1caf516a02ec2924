#pragma once

#include <bkit/picks.hpp>

#include <vector>

namespace bkit {

// Azimuthal-symmetry window for paired breakouts, inclusive at both ends.
inline constexpr double kMinPairSeparationDeg = 160.0;
inline constexpr double kMaxPairSeparationDeg = 200.0;

// ((x mod 360) + 360) mod 360. Throws ParameterError for non-finite x.
double circ360(double x);

struct DepthGroup {
    double depth = 0.0;
    std::vector<BreakoutPick> picks;
};

struct ValidationOutcome {
    PickSet retained;
    PickSet rejected;
};

// Exactly two picks whose azimuths are 160..200 degrees apart are kept (status validated);
// anything else is rejected with the reason recorded on each pick.
ValidationOutcome validate_depth(const DepthGroup& group, PickSource source = PickSource::segnet);

// Groups picks by exact depth value and validates each group.
ValidationOutcome validate(const PickSet& set);

}  // namespace bkit
