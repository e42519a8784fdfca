#include "tollane/design.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <sstream>
#include <utility>

#include "class_table.hpp"

namespace tollane {

using detail::cap_of;
using detail::chooses;
using detail::Cls;
using detail::coord;
using detail::weight;

namespace {

constexpr double kGoldenTol = 1e-9;
constexpr int kGoldenMaxIter = 200;
constexpr double kInvPhi = 0.6180339887498949;
constexpr double kSplitTol = 1e-9;
constexpr double kIndifferenceTol = 1e-10;

double objective_value(const EquilibriumReport& r, Objective o) {
  return o == Objective::BestCase ? r.j_best : r.j_worst;
}

void check_grid(std::span<const double> values, const char* what,
                double min_value) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] >= min_value)) {
      std::ostringstream oss;
      oss << what << " grid values must be >= " << min_value;
      throw PreconditionError(oss.str());
    }
    if (i > 0 && values[i] <= values[i - 1]) {
      std::ostringstream oss;
      oss << what << " grid must be strictly ascending";
      throw PreconditionError(oss.str());
    }
  }
}

// Coarse scan guards against multimodal delay configurations, then
// golden-section refinement inside the winning bracket. Ties keep the
// smallest parameter; the returned value never exceeds any evaluation made.
template <typename F>
Optimum grid_golden_minimize(const F& evaluate, double lo, double hi,
                             int grid_steps) {
  if (grid_steps < 3)
    throw PreconditionError("grid_steps must be >= 3 for the coarse scan");
  Optimum incumbent{lo, evaluate(lo)};
  if (!(hi > lo)) return incumbent;

  std::vector<double> grid(static_cast<std::size_t>(grid_steps));
  for (int i = 0; i < grid_steps; ++i)
    grid[static_cast<std::size_t>(i)] =
        lo + (hi - lo) * static_cast<double>(i) / (grid_steps - 1);

  const auto consider = [&](double x, double j) {
    if (j < incumbent.value) incumbent = {x, j};
  };

  int best_i = 0;
  for (int i = 1; i < grid_steps; ++i) {
    const double j = evaluate(grid[static_cast<std::size_t>(i)]);
    if (j < incumbent.value) best_i = i;
    consider(grid[static_cast<std::size_t>(i)], j);
  }

  double a = grid[static_cast<std::size_t>(std::max(0, best_i - 1))];
  double b = grid[static_cast<std::size_t>(
      std::min(grid_steps - 1, best_i + 1))];
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = evaluate(x1);
  double f2 = evaluate(x2);
  consider(x1, f1);
  consider(x2, f2);
  for (int it = 0; it < kGoldenMaxIter && b - a > kGoldenTol; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = evaluate(x1);
      consider(x1, f1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = evaluate(x2);
      consider(x2, f2);
    }
  }
  return incumbent;
}

void eval_toll_point(const Scenario& base, double tau, SweepCurve& c,
                     std::size_t i) {
  Scenario s = base;
  s.toll = tau;
  const EquilibriumReport r = equilibrium_report(s);
  c.parameter[i] = tau;
  c.j_best[i] = r.j_best;
  c.j_worst[i] = r.j_worst;
  c.kind[i] = r.set.kind;
}

void eval_threshold_point(const CarpoolModel& cm, const ScenarioBase& base,
                          double n, SweepCurve& c, std::size_t i) {
  const Scenario s = make_scenario(base, demands_from_threshold(cm, n), n);
  const EquilibriumReport r = equilibrium_report(s);
  c.parameter[i] = n;
  c.j_best[i] = r.j_best;
  c.j_worst[i] = r.j_worst;
  c.kind[i] = r.set.kind;
}

}  // namespace

void SweepCurve::resize(std::size_t n) {
  parameter.resize(n);
  j_best.resize(n);
  j_worst.resize(n);
  kind.resize(n);
}

SweepCurve sweep_toll_serial(const Scenario& s, std::span<const double> taus) {
  s.validate();
  check_grid(taus, "toll", 0.0);
  SweepCurve c;
  c.resize(taus.size());
  for (std::size_t i = 0; i < taus.size(); ++i)
    eval_toll_point(s, taus[i], c, i);
  return c;
}

SweepCurve sweep_toll(const Scenario& s, std::span<const double> taus) {
  s.validate();
  check_grid(taus, "toll", 0.0);
  SweepCurve c;
  c.resize(taus.size());
  std::exception_ptr failure;
  const std::int64_t count = static_cast<std::int64_t>(taus.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      eval_toll_point(s, taus[static_cast<std::size_t>(i)], c,
                      static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return c;
}

Optimum optimize_toll(const Scenario& s, Objective objective, int grid_steps) {
  s.validate();
  const double tau_hi = std::max(0.0, uniqueness_thresholds(s).all_lane2_min);
  const auto j_at = [&](double tau) {
    Scenario v = s;
    v.toll = tau;
    return objective_value(equilibrium_report(v), objective);
  };
  return grid_golden_minimize(j_at, 0.0, tau_hi, grid_steps);
}

DemandProfile demands_from_threshold(const CarpoolModel& cm, double n) {
  if (!(n >= 2.0))
    throw PreconditionError(
        "demands_from_threshold: occupancy threshold must be >= 2");
  if (!cm.carpool_prob)
    throw PreconditionError("carpool model has no probability function");
  const double p = cm.carpool_prob(n);
  if (!(p >= 0.0 && p <= 1.0)) {
    std::ostringstream oss;
    oss << "carpool probability p(" << n << ") = " << p
        << " lies outside [0,1]";
    throw PreconditionError(oss.str());
  }
  return {cm.hv_total * (1.0 - p), cm.hv_total * p, cm.av_total * (1.0 - p),
          cm.av_total * p};
}

Scenario make_scenario(const ScenarioBase& base, const DemandProfile& demand,
                       double occupancy) {
  return {base.delay_lane1, base.delay_lane2, demand,
          base.toll,        occupancy,        base.asymmetry,
          base.policy};
}

SweepCurve sweep_threshold_serial(const CarpoolModel& cm,
                                  const ScenarioBase& base,
                                  std::span<const double> ns) {
  check_grid(ns, "occupancy", 2.0);
  SweepCurve c;
  c.resize(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i)
    eval_threshold_point(cm, base, ns[i], c, i);
  return c;
}

SweepCurve sweep_threshold(const CarpoolModel& cm, const ScenarioBase& base,
                           std::span<const double> ns) {
  check_grid(ns, "occupancy", 2.0);
  SweepCurve c;
  c.resize(ns.size());
  std::exception_ptr failure;
  const std::int64_t count = static_cast<std::int64_t>(ns.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      eval_threshold_point(cm, base, ns[static_cast<std::size_t>(i)], c,
                           static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return c;
}

Optimum optimize_threshold(const CarpoolModel& cm, const ScenarioBase& base,
                           Objective objective, double n_lo, double n_hi,
                           int grid_steps) {
  if (!(n_lo >= 2.0) || !(n_hi >= n_lo))
    throw PreconditionError(
        "optimize_threshold: range must satisfy 2 <= n_lo <= n_hi");
  const auto j_at = [&](double n) {
    const Scenario s = make_scenario(base, demands_from_threshold(cm, n), n);
    return objective_value(equilibrium_report(s), objective);
  };
  return grid_golden_minimize(j_at, n_lo, n_hi, grid_steps);
}

Optimum optimize_threshold(const CarpoolModel& cm, const ScenarioBase& base,
                           Objective objective,
                           std::span<const double> candidates) {
  if (candidates.empty())
    throw PreconditionError("optimize_threshold: empty candidate list");
  Optimum incumbent;
  bool first = true;
  for (double n : candidates) {
    if (!(n >= 2.0))
      throw PreconditionError(
          "optimize_threshold: candidate occupancy must be >= 2");
    const Scenario s = make_scenario(base, demands_from_threshold(cm, n), n);
    const double j = objective_value(equilibrium_report(s), objective);
    if (first || j < incumbent.value) incumbent = {n, j};
    first = false;
  }
  return incumbent;
}

VectorToll differentiate_tolls(const Scenario& s, double tau_star,
                               double delta) {
  s.validate();
  if (s.policy != LanePolicy{})
    throw PreconditionError(
        "differentiate_tolls: only the baseline policy tolls all three "
        "classes");
  if (!(tau_star > 0.0))
    throw PreconditionError("differentiate_tolls: tau_star must be > 0");
  if (!(delta > 0.0))
    throw PreconditionError("differentiate_tolls: delta must be > 0");
  Scenario at = s;
  at.toll = tau_star;
  if (uniqueness_class(at) != Classification::Interior)
    throw PreconditionError(
        "differentiate_tolls: tau_star does not induce non-unique equilibria");

  // Boundary ties go to the lower sub-case; the slack covers the root
  // solver's 1e-10 tolerance so exact-threshold cases stay deterministic.
  const double f1_star = solve_critical_flow(at) - 1e-9;
  const double up = tau_star + delta;
  const double down = std::max(0.0, tau_star - delta);
  const VehicleCaps u = vehicle_caps(s);
  const double mu = s.asymmetry;
  const double av_block = mu * (u.av_lo + u.av_ho);

  if (detail::occupancy_vs_inverse_asymmetry(s) <= 0) {
    if (f1_star <= av_block) return {up, up, tau_star};
    if (f1_star <= u.hv_ho + av_block) return {up, tau_star, down};
    return {tau_star, down, down};
  }
  if (f1_star <= u.hv_ho + mu * u.av_ho) return {up, tau_star, up};
  if (f1_star <= u.hv_ho + av_block) return {up, down, tau_star};
  return {tau_star, down, down};
}

VectorTollEquilibrium verify_vector_toll(const Scenario& s,
                                         const VectorToll& vt) {
  s.validate();
  const auto valid = [](double t) { return std::isfinite(t) && t >= 0.0; };
  if (!valid(vt.hv_lo) || !valid(vt.hv_ho) || !valid(vt.av_lo))
    throw std::invalid_argument(
        "vector toll components must be finite and >= 0");

  const VehicleCaps u = vehicle_caps(s);
  const FlowBounds b = flow_bounds(s);
  // Willingness-to-pay threshold: a class with toll below gap(f1) gains by
  // moving to lane 1. Decreasing in f1.
  const auto gap = [&](double f1) {
    return s.delay_lane2(b.f1_max - f1) - s.delay_lane1(f1);
  };

  struct Group {
    double toll = 0.0;
    std::vector<Cls> classes;
    double eff_cap = 0.0;
  };
  std::vector<std::pair<double, Cls>> entries;
  const auto add = [&](Cls c, double toll) {
    if (chooses(s, c)) entries.emplace_back(toll, c);
  };
  add(Cls::HvLo, vt.hv_lo);
  add(Cls::HvHo, vt.hv_ho);
  add(Cls::AvLo, vt.av_lo);
  std::stable_sort(entries.begin(), entries.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Group> groups;
  for (const auto& [toll, c] : entries) {
    if (groups.empty() || groups.back().toll != toll)
      groups.push_back({toll, {}, 0.0});
    groups.back().classes.push_back(c);
    groups.back().eff_cap += weight(s, c) * cap_of(u, c);
  }

  FlowDistribution base = detail::pure_point(s, false);
  double filled = b.f1_min;
  const Group* split = nullptr;
  double split_budget = 0.0;
  for (const Group& g : groups) {
    const double next = filled + g.eff_cap;
    if (gap(next) >= g.toll) {
      for (Cls c : g.classes) coord(base, c) = cap_of(u, c);
      filled = next;
      continue;
    }
    if (gap(filled) > g.toll) {
      // The group is indifferent at gap(f1) = toll; bisect for the split,
      // then interpolate inside the final bracket as in the critical-flow
      // solve.
      double lo = filled;
      double hi = next;
      double over = gap(lo) - g.toll;
      double under = gap(hi) - g.toll;
      for (int it = 0; it < 200 && hi - lo > kIndifferenceTol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double gm = gap(mid) - g.toll;
        if (gm > 0.0) {
          lo = mid;
          over = gm;
        } else {
          hi = mid;
          under = gm;
        }
      }
      double root = 0.5 * (lo + hi);
      if (over > under) {
        const double x = lo + over * (hi - lo) / (over - under);
        if (std::isfinite(x) && x >= lo && x <= hi) root = x;
      }
      split = &g;
      split_budget = root - filled;
    }
    break;  // every later group faces a higher toll and stays on lane 2
  }

  const auto fill_group = [&](const Group& g, double budget,
                              const std::array<Cls, 3>& order) {
    FlowDistribution f = base;
    const double snap = 1e-12 * std::max(1.0, budget);
    double left = std::max(0.0, budget);
    for (Cls c : order) {
      if (std::find(g.classes.begin(), g.classes.end(), c) == g.classes.end())
        continue;
      const double w = weight(s, c);
      const double take = std::clamp(left / w, 0.0, cap_of(u, c));
      coord(f, c) = take;
      left -= w * take;
      if (left <= snap) left = 0.0;
    }
    return f;
  };

  VectorTollEquilibrium result;
  if (split == nullptr) {
    result.flow = base;
    result.j = result.j_best = result.j_worst = total_delay(s, base);
    return result;
  }
  const FlowDistribution best =
      fill_group(*split, split_budget, detail::best_fill_order(s));
  result.flow = best;
  result.j = result.j_best = total_delay(s, best);
  result.j_worst = result.j_best;
  // A tied group genuinely split across lanes leaves the class composition
  // on lane 1 undetermined; report the delay range instead of a point.
  if (split->classes.size() >= 2 && split_budget > kSplitTol &&
      split_budget < split->eff_cap - kSplitTol) {
    result.unique = false;
    const FlowDistribution worst =
        fill_group(*split, split_budget, detail::worst_fill_order(s));
    result.j_worst = total_delay(s, worst);
  }
  return result;
}

}  // namespace tollane
