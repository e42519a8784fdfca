#pragma once

#include <span>
#include <string>

#include "tollane/design.hpp"
#include "tollane/model.hpp"

namespace tollane {

std::string to_string(PolicyKind kind);

/// Baseline pins only high-occupancy AVs; Hovl additionally frees
/// high-occupancy human-driven vehicles; Dla frees all autonomous vehicles.
LanePolicy make_policy(PolicyKind kind);

// Toll sweeps of the high-occupancy-vehicle-lane and dedicated-AV-lane
// policies on the same grid with otherwise identical parameters.
struct PolicyComparison {
  SweepCurve hovl;
  SweepCurve dla;
};

PolicyComparison compare_policies(const DemandProfile& demand,
                                  const DelayFunction& delay_lane1,
                                  const DelayFunction& delay_lane2,
                                  double occupancy, double asymmetry,
                                  std::span<const double> taus);

}  // namespace tollane
