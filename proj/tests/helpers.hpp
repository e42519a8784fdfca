#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "tollane/design.hpp"
#include "tollane/equilibrium.hpp"
#include "tollane/model.hpp"

// Shared fixtures: the worked two-lane scenario used across the suite
// (demands 5/4/3/4, linear BPR 3 + f/10 on both lanes) and random scenario
// generators for the property tests.
namespace test_helpers {

inline tollane::DelayFunction bpr(double theta, double gamma, double beta,
                                  double m) {
  return {theta, gamma, beta, m};
}

inline tollane::Scenario scenario_n4(double tau = 0.5) {
  tollane::Scenario s;
  s.delay_lane1 = bpr(3.0, 1.0, 1.0, 10.0);
  s.delay_lane2 = bpr(3.0, 1.0, 1.0, 10.0);
  s.demand = {5.0, 4.0, 3.0, 4.0};
  s.toll = tau;
  s.occupancy = 4.0;
  s.asymmetry = 0.5;
  return s;
}

inline tollane::Scenario scenario_n2(double tau = 0.5) {
  tollane::Scenario s = scenario_n4(tau);
  s.occupancy = 2.0;
  s.asymmetry = 0.4;
  return s;
}

struct ClassSpec {
  bool chooses = true;
  double weight = 1.0;
  double cap = 0.0;
};

inline std::array<ClassSpec, 3> class_specs(const tollane::Scenario& s) {
  const tollane::VehicleCaps u = tollane::vehicle_caps(s);
  return {{{true, 1.0, u.hv_lo},
           {s.policy.hv_ho_chooses(), 1.0, u.hv_ho},
           {s.policy.av_lo_chooses(), s.asymmetry, u.av_lo}}};
}

// Random member of the equilibrium simplex at f1_star: the choosing
// coordinates are drawn sequentially in a shuffled order, each uniform on
// its conditional feasible range, the last one taking the exact remainder.
// Always succeeds for a valid interior f1_star.
inline std::optional<tollane::FlowDistribution> sample_simplex(
    const tollane::Scenario& s, double f1_star, std::mt19937& rng) {
  const auto specs = class_specs(s);
  const tollane::VehicleCaps u = tollane::vehicle_caps(s);
  const double budget = f1_star - tollane::flow_bounds(s).f1_min;

  std::vector<int> order;
  for (int i = 0; i < 3; ++i)
    if (specs[static_cast<std::size_t>(i)].chooses) order.push_back(i);
  if (order.empty()) return std::nullopt;
  std::shuffle(order.begin(), order.end(), rng);

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double coords[3] = {0.0, 0.0, 0.0};
  double left = std::max(0.0, budget);
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& spec = specs[static_cast<std::size_t>(order[k])];
    double rest = 0.0;  // weighted capacity still available after this class
    for (std::size_t j = k + 1; j < order.size(); ++j) {
      const auto& later = specs[static_cast<std::size_t>(order[j])];
      rest += later.weight * later.cap;
    }
    const double lo = std::max(0.0, (left - rest) / spec.weight);
    const double hi = std::min(spec.cap, left / spec.weight);
    const double v = (k + 1 == order.size())
                         ? std::clamp(left / spec.weight, 0.0, spec.cap)
                         : lo + unit(rng) * (std::max(hi, lo) - lo);
    coords[order[k]] = v;
    left = std::max(0.0, left - spec.weight * v);
  }

  tollane::FlowDistribution f;
  f.hv_lo = coords[0];
  f.hv_ho = specs[1].chooses ? coords[1] : u.hv_ho;
  f.av_lo = specs[2].chooses ? coords[2] : u.av_lo;
  return f;
}

// Demands in [0,6], BPR theta in [1,5], gain in [0.5,2], exponent in {1,2},
// capacity in [5,15]; n in [2,4], mu in [0.3,0.9], toll in [0,1].
inline tollane::Scenario random_small_scenario(std::mt19937& rng) {
  std::uniform_real_distribution<double> demand(0.0, 6.0);
  std::uniform_real_distribution<double> theta(1.0, 5.0);
  std::uniform_real_distribution<double> gamma(0.5, 2.0);
  std::uniform_real_distribution<double> cap(5.0, 15.0);
  std::uniform_real_distribution<double> occ(2.0, 4.0);
  std::uniform_real_distribution<double> mu(0.3, 0.9);
  std::uniform_real_distribution<double> tau(0.0, 1.0);
  std::bernoulli_distribution quadratic(0.5);

  tollane::Scenario s;
  s.demand = {demand(rng), demand(rng), demand(rng), demand(rng)};
  if (tollane::total_commuters(s.demand) <= 0.0) s.demand.hv_lo = 1.0;
  s.delay_lane1 = {theta(rng), gamma(rng), quadratic(rng) ? 2.0 : 1.0,
                   cap(rng)};
  s.delay_lane2 = {theta(rng), gamma(rng), quadratic(rng) ? 2.0 : 1.0,
                   cap(rng)};
  s.toll = tau(rng);
  s.occupancy = occ(rng);
  s.asymmetry = mu(rng);
  return s;
}

// Resamples until the toll sits strictly inside the non-unique band.
inline tollane::Scenario random_interior_scenario(std::mt19937& rng) {
  std::uniform_real_distribution<double> frac(0.1, 0.9);
  for (;;) {
    tollane::Scenario s = random_small_scenario(rng);
    const tollane::TollThresholds t = tollane::uniqueness_thresholds(s);
    const double lo = std::max(0.0, t.all_lane1_max);
    if (t.all_lane2_min - lo <= 0.05) continue;
    s.toll = lo + frac(rng) * (t.all_lane2_min - lo);
    if (tollane::uniqueness_class(s) == tollane::Classification::Interior)
      return s;
  }
}

inline bool near(double a, double b, double tol) {
  return std::abs(a - b) <= tol;
}

// Stability check under per-class tolls: no choosing class present on a
// lane may see a cheaper cost on the other lane, with its own toll applied
// to lane 1. Independent of the water-filling solver.
inline bool vector_wardrop_check(const tollane::Scenario& s,
                                 const tollane::VectorToll& vt,
                                 const tollane::FlowDistribution& f,
                                 double tol = 1e-9) {
  using namespace tollane;
  const EffectiveFlows ef = effective_flows(s, f);
  const double d1 = s.delay_lane1(ef.lane1);
  const double d2 = s.delay_lane2(ef.lane2);
  const VehicleCaps u = vehicle_caps(s);
  const auto stable = [&](bool chooses, double toll, double flow,
                          double cap) {
    if (!chooses) return true;
    const double c1 = d1 + toll;
    if (flow > 1e-12 && c1 > d2 + tol) return false;
    if (cap - flow > 1e-12 && d2 > c1 + tol) return false;
    return true;
  };
  return stable(true, vt.hv_lo, f.hv_lo, u.hv_lo) &&
         stable(s.policy.hv_ho_chooses(), vt.hv_ho, f.hv_ho, u.hv_ho) &&
         stable(s.policy.av_lo_chooses(), vt.av_lo, f.av_lo, u.av_lo);
}

// Marginal delay of the BPR form; valid for exponent >= 1.
inline double bpr_slope(const tollane::DelayFunction& d, double f) {
  if (d.exponent == 1.0) return d.gain / d.capacity;
  return d.gain * d.exponent *
         std::pow(f / d.capacity, d.exponent - 1.0) / d.capacity;
}

// How far the delay extremes of the brute-force oracle may drift from the
// analytic best/worst values. Two effects: grid points within the oracle's
// cost tolerance can sit in an effective-flow band around the critical flow
// (wide where the cost gap is flat), and the true extremes round to nearby
// grid points. Assumes exponents in {1,2}, where the marginal delays are
// affine and their envelope is extremal at the flow-range endpoints.
inline double oracle_delay_slack(const tollane::Scenario& s, int steps) {
  using namespace tollane;
  const VehicleCaps u = vehicle_caps(s);
  const FlowBounds b = flow_bounds(s);
  const double tol = grid_cost_tolerance(s, steps);
  const double span = std::max(b.f1_max - b.f1_min, 1e-12);

  const auto gap_slope = [&](double f1) {
    return bpr_slope(s.delay_lane1, f1) +
           bpr_slope(s.delay_lane2, b.f1_max - f1);
  };
  const double gap_slope_min =
      std::max(std::min(gap_slope(b.f1_min), gap_slope(b.f1_max)), 1e-12);
  const double band = std::min(tol / gap_slope_min, span);

  const double n = s.occupancy;
  double commuters_per_flow = 1.0;  // hv_lo carries 1 commuter at weight 1
  if (s.policy.hv_ho_chooses()) commuters_per_flow = std::max(commuters_per_flow, n);
  if (s.policy.av_lo_chooses())
    commuters_per_flow = std::max(commuters_per_flow, 1.0 / s.asymmetry);

  const double commuters = total_commuters(s.demand);
  const double delay_hi = s.delay_lane1(b.f1_max) + s.delay_lane2(b.f1_max);
  const double slope_hi =
      bpr_slope(s.delay_lane1, b.f1_max) + bpr_slope(s.delay_lane2, b.f1_max);
  const double per_flow_delay = commuters_per_flow * (s.toll + tol) +
                                commuters * slope_hi;

  double rounded_commuters = u.hv_lo;
  if (s.policy.hv_ho_chooses()) rounded_commuters += n * u.hv_ho;
  if (s.policy.av_lo_chooses()) rounded_commuters += u.av_lo;
  rounded_commuters /= 2.0 * steps;
  const double rounding = rounded_commuters * delay_hi + commuters * tol;

  return 2.0 * (band * per_flow_delay + rounding);
}

}  // namespace test_helpers
