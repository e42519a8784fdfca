#pragma once

#include <stdexcept>
#include <string>

namespace tollane {

// Thrown when a flow distribution violates a demand or policy bound.
struct FeasibilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when an operation is called outside its contract (e.g. a root solve
// in a regime where no root exists).
struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Commuter demand per unit time for the four vehicle classes. High-occupancy
// classes are stated in commuters, not vehicles; divide by the occupancy
// threshold to get vehicle flow.
struct DemandProfile {
  double hv_lo = 0.0;
  double hv_ho = 0.0;
  double av_lo = 0.0;
  double av_ho = 0.0;

  bool operator==(const DemandProfile&) const = default;
  void validate() const;
};

double total_commuters(const DemandProfile& d);

/// Volume-delay curve free_flow + gain * (flow / capacity)^exponent.
struct DelayFunction {
  double free_flow = 0.0;
  double gain = 0.0;
  double exponent = 1.0;
  double capacity = 1.0;

  double operator()(double flow) const;

  bool operator==(const DelayFunction&) const = default;
  void validate(const std::string& label) const;
};

enum class PolicyKind { Baseline, Hovl, Dla };

// Which classes are pinned to lane 1 instead of making a lane choice.
// High-occupancy AVs ride lane 1 free under every policy; single-occupant
// human-driven vehicles always choose. The two flags realize the
// high-occupancy-vehicle-lane and dedicated-AV-lane policies.
struct LanePolicy {
  bool pin_hv_ho = false;
  bool pin_av_lo = false;

  bool hv_ho_chooses() const { return !pin_hv_ho; }
  bool av_lo_chooses() const { return !pin_av_lo; }
  bool operator==(const LanePolicy&) const = default;
};

// One tolled two-lane segment: delay curves, demands, uniform toll,
// occupancy threshold n and AV capacity asymmetry mu.
struct Scenario {
  DelayFunction delay_lane1;
  DelayFunction delay_lane2;
  DemandProfile demand;
  double toll = 0.0;
  double occupancy = 2.0;  // n >= 2, real-valued
  double asymmetry = 0.5;  // mu in (0,1)
  LanePolicy policy;

  bool operator==(const Scenario&) const = default;
  void validate() const;
};

// Lane-1 vehicle flows of the three tolled classes. Lane-2 flows are the
// demand-implied complements and are never stored. Classes pinned by the
// policy must sit at their full vehicle demand.
struct FlowDistribution {
  double hv_lo = 0.0;
  double hv_ho = 0.0;
  double av_lo = 0.0;

  bool operator==(const FlowDistribution&) const = default;
};

// Vehicle-flow demand bounds per class (commuter demand / occupancy for the
// high-occupancy classes).
struct VehicleCaps {
  double hv_lo = 0.0;
  double hv_ho = 0.0;
  double av_lo = 0.0;
  double av_ho = 0.0;
};

VehicleCaps vehicle_caps(const Scenario& s);

struct FlowBounds {
  double f1_min = 0.0;
  double f1_max = 0.0;
};

// Range of the lane-1 effective flow: the pinned classes' contribution up to
// the full demand of every class.
FlowBounds flow_bounds(const Scenario& s);

// Absolute slack on feasibility bounds, absorbing solver rounding.
inline constexpr double kFeasibilityTol = 1e-12;

bool is_feasible(const Scenario& s, const FlowDistribution& f,
                 double tol = kFeasibilityTol);

// Throws FeasibilityError naming the violated bound.
void check_feasible(const Scenario& s, const FlowDistribution& f,
                    double tol = kFeasibilityTol);

struct EffectiveFlows {
  double lane1 = 0.0;
  double lane2 = 0.0;
};

// Headway-weighted flows per lane; AVs count with weight mu. lane2 is
// defined as f1_max - lane1, so the pair conserves total effective flow.
EffectiveFlows effective_flows(const Scenario& s, const FlowDistribution& f);

struct TravelCosts {
  double lane1 = 0.0;
  double lane2 = 0.0;
};

// Lane 1 pays delay plus toll; lane 2 pays delay only.
TravelCosts travel_costs(const Scenario& s, const FlowDistribution& f);

/// Total delay summed over all commuters on both lanes.
double total_delay(const Scenario& s, const FlowDistribution& f);

}  // namespace tollane
