#include "tollane/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>

#include "class_table.hpp"

namespace tollane {

using detail::cap_of;
using detail::chooses;
using detail::Cls;
using detail::coord;
using detail::kTolledClasses;
using detail::weight;

namespace {

constexpr double kBisectionTol = 1e-10;
constexpr int kBisectionMaxIter = 200;

// Distribute the effective-flow budget across choosing classes in priority
// order; pinned classes sit at their caps. The first class in the order ends
// at its simplex maximum, the last at its simplex minimum.
FlowDistribution greedy_fill(const Scenario& s, double budget,
                             const std::array<Cls, 3>& order) {
  const VehicleCaps u = vehicle_caps(s);
  FlowDistribution f = detail::pure_point(s, false);
  const double snap = 1e-12 * std::max(1.0, budget);
  double left = std::max(0.0, budget);
  for (Cls c : order) {
    if (!chooses(s, c)) continue;
    const double w = weight(s, c);
    const double take = std::clamp(left / w, 0.0, cap_of(u, c));
    coord(f, c) = take;
    left -= w * take;
    // residue below rounding noise is treated as consumed
    if (left <= snap) left = 0.0;
  }
  return f;
}

std::vector<double> axis_values(double cap, int steps, bool pinned) {
  if (pinned) return {cap};
  if (cap <= 0.0) return {0.0};
  std::vector<double> v(static_cast<std::size_t>(steps) + 1);
  for (int i = 0; i <= steps; ++i)
    v[static_cast<std::size_t>(i)] = cap * static_cast<double>(i) / steps;
  v.back() = cap;  // exact endpoint, so pure points carry no phantom residue
  return v;
}

}  // namespace

std::string to_string(Classification c) {
  switch (c) {
    case Classification::AllLane2: return "all_lane2";
    case Classification::AllLane1: return "all_lane1";
    case Classification::Interior: return "interior";
  }
  return "?";
}

TollThresholds uniqueness_thresholds(const Scenario& s) {
  const FlowBounds b = flow_bounds(s);
  return {s.delay_lane2(0.0) - s.delay_lane1(b.f1_max),
          s.delay_lane2(b.f1_max - b.f1_min) - s.delay_lane1(b.f1_min)};
}

Classification uniqueness_class(const Scenario& s) {
  const TollThresholds t = uniqueness_thresholds(s);
  // Boundary equality counts as the pure case; the 1e-12 slack absorbs the
  // rounding of the threshold arithmetic so exact-boundary tolls land there.
  // When flat delays make both pure conditions hold, all-lane-2 wins.
  constexpr double kThresholdTol = 1e-12;
  if (s.toll >= t.all_lane2_min - kThresholdTol) return Classification::AllLane2;
  if (s.toll <= t.all_lane1_max + kThresholdTol) return Classification::AllLane1;
  return Classification::Interior;
}

double solve_critical_flow(const Scenario& s) {
  if (uniqueness_class(s) != Classification::Interior)
    throw PreconditionError(
        "solve_critical_flow: equilibrium is unique, no interior cost "
        "intersection exists");
  const FlowBounds b = flow_bounds(s);
  const auto gap = [&](double f1) {
    return s.delay_lane1(f1) + s.toll - s.delay_lane2(b.f1_max - f1);
  };
  // Interior classification guarantees gap(f1_min) < 0 < gap(f1_max); the
  // gap is monotone, so bisection is always bracketed.
  double lo = b.f1_min;
  double hi = b.f1_max;
  double gap_lo = gap(lo);
  double gap_hi = gap(hi);
  for (int it = 0; it < kBisectionMaxIter && hi - lo > kBisectionTol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double gap_mid = gap(mid);
    if (gap_mid < 0.0) {
      lo = mid;
      gap_lo = gap_mid;
    } else {
      hi = mid;
      gap_hi = gap_mid;
    }
  }
  // One interpolation inside the final bracket polishes the root well past
  // the bisection tolerance (exact for linear delay curves).
  if (gap_hi > gap_lo) {
    const double x = lo - gap_lo * (hi - lo) / (gap_hi - gap_lo);
    if (std::isfinite(x) && x >= lo && x <= hi) return x;
  }
  return 0.5 * (lo + hi);
}

CoordinateExtremes coordinate_extremes(const Scenario& s, double f1_star) {
  const VehicleCaps u = vehicle_caps(s);
  const double budget = std::max(0.0, f1_star - flow_bounds(s).f1_min);

  double other_sum[3];  // weighted capacity of the other choosing classes
  for (int k = 0; k < 3; ++k) {
    other_sum[k] = 0.0;
    for (int j = 0; j < 3; ++j)
      if (j != k && chooses(s, kTolledClasses[static_cast<std::size_t>(j)]))
        other_sum[k] += weight(s, kTolledClasses[static_cast<std::size_t>(j)]) *
                        cap_of(u, kTolledClasses[static_cast<std::size_t>(j)]);
  }

  const auto range = [&](int k) -> ClassRange {
    const Cls c = kTolledClasses[static_cast<std::size_t>(k)];
    if (!chooses(s, c)) {
      const double cap = cap_of(u, c);
      return {cap, cap};
    }
    const double w = weight(s, c);
    return {std::max(0.0, (budget - other_sum[k]) / w),
            std::min(cap_of(u, c), budget / w)};
  };
  return {range(0), range(1), range(2)};
}

BestWorst select_best_worst(const Scenario& s, double f1_star) {
  const double budget = f1_star - flow_bounds(s).f1_min;
  return {greedy_fill(s, budget, detail::best_fill_order(s)),
          greedy_fill(s, budget, detail::worst_fill_order(s))};
}

EquilibriumReport equilibrium_report(const Scenario& s) {
  s.validate();
  EquilibriumReport r;
  r.set.kind = uniqueness_class(s);
  if (r.set.kind != Classification::Interior) {
    const FlowDistribution f =
        detail::pure_point(s, r.set.kind == Classification::AllLane1);
    r.set.point = f;
    r.set.f1_star = effective_flows(s, f).lane1;
    r.best = r.worst = f;
    r.j_best = r.j_worst = total_delay(s, f);
    return r;
  }
  r.set.f1_star = solve_critical_flow(s);
  const BestWorst bw = select_best_worst(s, r.set.f1_star);
  r.best = bw.best;
  r.worst = bw.worst;
  r.j_best = total_delay(s, bw.best);
  r.j_worst = total_delay(s, bw.worst);
  return r;
}

bool wardrop_check(const Scenario& s, const FlowDistribution& f, double tol) {
  const TravelCosts c = travel_costs(s, f);
  const VehicleCaps u = vehicle_caps(s);
  // flows below the feasibility tolerance count as absent from the lane
  const auto stable = [&](Cls cls, double lane1_flow, double cap) {
    if (!chooses(s, cls)) return true;
    if (lane1_flow > kFeasibilityTol && c.lane1 > c.lane2 + tol) return false;
    if (cap - lane1_flow > kFeasibilityTol && c.lane2 > c.lane1 + tol)
      return false;
    return true;
  };
  return stable(Cls::HvLo, f.hv_lo, u.hv_lo) &&
         stable(Cls::HvHo, f.hv_ho, u.hv_ho) &&
         stable(Cls::AvLo, f.av_lo, u.av_lo);
}

double grid_cost_tolerance(const Scenario& s, int grid_steps) {
  const VehicleCaps u = vehicle_caps(s);
  const FlowBounds b = flow_bounds(s);
  // Rounding every choosing coordinate to its nearest grid value moves the
  // effective flow by at most half the weighted cell sum.
  double cell = 0.0;
  if (grid_steps > 0) {
    cell += u.hv_lo / grid_steps;
    if (s.policy.hv_ho_chooses()) cell += u.hv_ho / grid_steps;
    if (s.policy.av_lo_chooses()) cell += s.asymmetry * u.av_lo / grid_steps;
    cell *= 0.5;
  }
  cell = std::min(cell, b.f1_max);
  // The delay derivative is monotone for power-law curves, so the largest
  // one-cell increment sits at an end of the flow range.
  const auto increment = [&](const DelayFunction& d) {
    return std::max(d(cell) - d(0.0), d(b.f1_max) - d(b.f1_max - cell));
  };
  return increment(s.delay_lane1) + increment(s.delay_lane2) + kWardropTol;
}

std::vector<FlowDistribution> brute_force_equilibria_serial(const Scenario& s,
                                                            int grid_steps) {
  if (grid_steps < 1)
    throw PreconditionError("brute_force_equilibria: grid_steps must be >= 1");
  s.validate();
  const VehicleCaps u = vehicle_caps(s);
  const double tol = grid_cost_tolerance(s, grid_steps);
  const auto hv_lo = axis_values(u.hv_lo, grid_steps, false);
  const auto hv_ho = axis_values(u.hv_ho, grid_steps, s.policy.pin_hv_ho);
  const auto av_lo = axis_values(u.av_lo, grid_steps, s.policy.pin_av_lo);

  std::vector<FlowDistribution> out;
  for (double a : hv_lo)
    for (double b : hv_ho)
      for (double c : av_lo) {
        const FlowDistribution f{a, b, c};
        if (wardrop_check(s, f, tol)) out.push_back(f);
      }
  return out;
}

std::vector<FlowDistribution> brute_force_equilibria(const Scenario& s,
                                                     int grid_steps) {
  if (grid_steps < 1)
    throw PreconditionError("brute_force_equilibria: grid_steps must be >= 1");
  s.validate();
  const VehicleCaps u = vehicle_caps(s);
  const double tol = grid_cost_tolerance(s, grid_steps);
  const auto hv_lo = axis_values(u.hv_lo, grid_steps, false);
  const auto hv_ho = axis_values(u.hv_ho, grid_steps, s.policy.pin_hv_ho);
  const auto av_lo = axis_values(u.av_lo, grid_steps, s.policy.pin_av_lo);

  // One bucket per outer-axis value keeps the concatenation lexicographic no
  // matter how the loop iterations are scheduled.
  std::vector<std::vector<FlowDistribution>> buckets(hv_lo.size());
  std::exception_ptr failure;
  const std::int64_t count = static_cast<std::int64_t>(hv_lo.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      auto& bucket = buckets[static_cast<std::size_t>(i)];
      const double a = hv_lo[static_cast<std::size_t>(i)];
      for (double b : hv_ho)
        for (double c : av_lo) {
          const FlowDistribution f{a, b, c};
          if (wardrop_check(s, f, tol)) bucket.push_back(f);
        }
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<FlowDistribution> out;
  for (auto& bucket : buckets)
    out.insert(out.end(), bucket.begin(), bucket.end());
  return out;
}

}  // namespace tollane
