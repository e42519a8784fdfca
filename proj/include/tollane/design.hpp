#pragma once

#include <functional>
#include <span>
#include <vector>

#include "tollane/equilibrium.hpp"
#include "tollane/model.hpp"

namespace tollane {

enum class Objective { BestCase, WorstCase };

// Best/worst total commuter delay along a one-dimensional parameter grid.
struct SweepCurve {
  std::vector<double> parameter;
  std::vector<double> j_best;
  std::vector<double> j_worst;
  std::vector<Classification> kind;

  std::size_t size() const { return parameter.size(); }
  void resize(std::size_t n);
};

// Evaluates the equilibrium report at each toll value. The default variant
// splits the grid across OpenMP threads; results are assembled in input
// order either way, so both variants produce identical curves.
SweepCurve sweep_toll(const Scenario& s, std::span<const double> taus);
SweepCurve sweep_toll_serial(const Scenario& s, std::span<const double> taus);

struct Optimum {
  double parameter = 0.0;
  double value = 0.0;
};

// Coarse grid over [0, all_lane2 threshold] followed by golden-section
// refinement around the best bracket. The grid pass guards against
// multimodal delay configurations; ties keep the smallest parameter.
Optimum optimize_toll(const Scenario& s, Objective objective,
                      int grid_steps = 101);

// Commuter totals per propulsion type plus the carpool probability p(n),
// non-increasing in the occupancy threshold.
struct CarpoolModel {
  double hv_total = 0.0;
  double av_total = 0.0;
  std::function<double(double)> carpool_prob;
};

// Splits the commuter totals into the four class demands at threshold n.
DemandProfile demands_from_threshold(const CarpoolModel& cm, double n);

// Scenario parameters shared across occupancy thresholds.
struct ScenarioBase {
  DelayFunction delay_lane1;
  DelayFunction delay_lane2;
  double toll = 0.0;
  double asymmetry = 0.5;
  LanePolicy policy;
};

Scenario make_scenario(const ScenarioBase& base, const DemandProfile& demand,
                       double occupancy);

SweepCurve sweep_threshold(const CarpoolModel& cm, const ScenarioBase& base,
                           std::span<const double> ns);
SweepCurve sweep_threshold_serial(const CarpoolModel& cm,
                                  const ScenarioBase& base,
                                  std::span<const double> ns);

// Continuous range: grid plus golden-section refinement, as optimize_toll.
Optimum optimize_threshold(const CarpoolModel& cm, const ScenarioBase& base,
                           Objective objective, double n_lo, double n_hi,
                           int grid_steps = 101);

// Discrete candidate list: plain argmin, first hit wins ties.
Optimum optimize_threshold(const CarpoolModel& cm, const ScenarioBase& base,
                           Objective objective,
                           std::span<const double> candidates);

// Per-class tolls for the three choosing classes.
struct VectorToll {
  double hv_lo = 0.0;
  double hv_ho = 0.0;
  double av_lo = 0.0;

  bool operator==(const VectorToll&) const = default;
};

// Given an optimal uniform toll tau_star with non-unique equilibria,
// differentiates the class tolls so that the best-case equilibrium becomes
// the unique one: the class that splits across lanes at the best equilibrium
// keeps tau_star, higher-priority classes get tau_star - delta (clamped at
// 0) and lower-priority classes tau_star + delta.
VectorToll differentiate_tolls(const Scenario& s, double tau_star,
                               double delta);

struct VectorTollEquilibrium {
  bool unique = true;
  FlowDistribution flow;  // best-case member when not unique
  double j = 0.0;
  double j_best = 0.0;
  double j_worst = 0.0;
};

// Solves the lane choice equilibrium under per-class tolls by water-filling
// lane 1 in ascending toll order until the marginal class is indifferent.
// Classes sharing a toll form one Wardrop group; if such a group ends up
// split across lanes the equilibrium is not unique and the result reports
// the delay range instead of a single value.
VectorTollEquilibrium verify_vector_toll(const Scenario& s,
                                         const VectorToll& vt);

}  // namespace tollane
