#pragma once

#include <string>
#include <vector>

#include "tollane/model.hpp"

namespace tollane {

// Regime of the lane choice equilibrium. The equilibrium is unique exactly
// when the toll pushes every choosing class onto one lane; otherwise the
// equilibria form a simplex at the critical effective flow.
enum class Classification { AllLane2, AllLane1, Interior };

std::string to_string(Classification c);

// Toll levels separating the three regimes: at or above all_lane2_min every
// choosing class stays on lane 2; at or below all_lane1_max every choosing
// class pays and uses lane 1. Boundary equality counts as the pure case.
struct TollThresholds {
  double all_lane1_max = 0.0;
  double all_lane2_min = 0.0;
};

TollThresholds uniqueness_thresholds(const Scenario& s);

Classification uniqueness_class(const Scenario& s);

// Lane-1 effective flow where the two lane costs intersect. Only defined in
// the Interior regime; throws PreconditionError otherwise.
double solve_critical_flow(const Scenario& s);

struct ClassRange {
  double lo = 0.0;
  double hi = 0.0;
};

// Per-class coordinate ranges over the equilibrium simplex at f1_star.
// Pinned classes are constant at their vehicle demand.
struct CoordinateExtremes {
  ClassRange hv_lo;
  ClassRange hv_ho;
  ClassRange av_lo;
};

CoordinateExtremes coordinate_extremes(const Scenario& s, double f1_star);

struct BestWorst {
  FlowDistribution best;
  FlowDistribution worst;
};

// Simplex members minimizing / maximizing total commuter delay. The fill
// priority depends on how n compares with 1/mu: whichever of the
// high-occupancy or autonomous class carries more commuters per unit of
// effective flow is loaded onto lane 1 first for the best case; low-occupancy
// human drivers are loaded first for the worst case.
BestWorst select_best_worst(const Scenario& s, double f1_star);

// Either a unique equilibrium point or the simplex at f1_star.
struct EquilibriumSet {
  Classification kind = Classification::AllLane2;
  FlowDistribution point;   // meaningful when kind != Interior
  double f1_star = 0.0;     // lane-1 effective flow at equilibrium

  bool unique() const { return kind != Classification::Interior; }
};

struct EquilibriumReport {
  EquilibriumSet set;
  FlowDistribution best;
  FlowDistribution worst;
  double j_best = 0.0;
  double j_worst = 0.0;
};

// Full equilibrium characterization; never fails on a valid scenario.
EquilibriumReport equilibrium_report(const Scenario& s);

inline constexpr double kWardropTol = 1e-9;

// Definition of a lane choice equilibrium: any choosing class present on a
// lane must not see a cheaper cost on the other lane.
bool wardrop_check(const Scenario& s, const FlowDistribution& f,
                   double tol = kWardropTol);

// Cost tolerance matched to one grid cell of the brute-force enumeration.
double grid_cost_tolerance(const Scenario& s, int grid_steps);

// Enumerates the feasible box on a uniform grid and returns every point
// passing wardrop_check at the grid-scaled tolerance, in lexicographic
// order. Test oracle; the serial variant is the reference implementation.
std::vector<FlowDistribution> brute_force_equilibria(const Scenario& s,
                                                     int grid_steps);
std::vector<FlowDistribution> brute_force_equilibria_serial(const Scenario& s,
                                                            int grid_steps);

}  // namespace tollane
