#pragma once

#include <array>
#include <cmath>

#include "tollane/model.hpp"

// Internal per-class access helpers shared by the equilibrium and design
// translation units. Not part of the public surface.
namespace tollane::detail {

enum class Cls { HvLo, HvHo, AvLo };

inline constexpr std::array<Cls, 3> kTolledClasses = {Cls::HvLo, Cls::HvHo,
                                                      Cls::AvLo};

inline bool chooses(const Scenario& s, Cls c) {
  switch (c) {
    case Cls::HvLo: return true;
    case Cls::HvHo: return s.policy.hv_ho_chooses();
    case Cls::AvLo: return s.policy.av_lo_chooses();
  }
  return true;
}

inline double weight(const Scenario& s, Cls c) {
  return c == Cls::AvLo ? s.asymmetry : 1.0;
}

inline double cap_of(const VehicleCaps& u, Cls c) {
  switch (c) {
    case Cls::HvLo: return u.hv_lo;
    case Cls::HvHo: return u.hv_ho;
    case Cls::AvLo: return u.av_lo;
  }
  return 0.0;
}

inline double& coord(FlowDistribution& f, Cls c) {
  switch (c) {
    case Cls::HvLo: return f.hv_lo;
    case Cls::HvHo: return f.hv_ho;
    case Cls::AvLo: return f.av_lo;
  }
  return f.hv_lo;
}

inline double coord(const FlowDistribution& f, Cls c) {
  switch (c) {
    case Cls::HvLo: return f.hv_lo;
    case Cls::HvHo: return f.hv_ho;
    case Cls::AvLo: return f.av_lo;
  }
  return 0.0;
}

inline constexpr double kOccupancyCmpTol = 1e-12;

// Sign of n - 1/mu with a small tolerance; the branches of the best/worst
// construction are discontinuous in code even though the delay objective is
// continuous across them.
inline int occupancy_vs_inverse_asymmetry(const Scenario& s) {
  const double diff = s.occupancy - 1.0 / s.asymmetry;
  if (std::abs(diff) <= kOccupancyCmpTol) return 0;
  return diff > 0.0 ? 1 : -1;
}

// Lane-1 fill priority minimizing total delay: the class carrying more
// commuters per unit of effective flow goes first, low-occupancy human
// drivers always last. The n = 1/mu tie leaves the HO/AV split free and we
// fill HV,HO by convention.
inline std::array<Cls, 3> best_fill_order(const Scenario& s) {
  return occupancy_vs_inverse_asymmetry(s) >= 0
             ? std::array{Cls::HvHo, Cls::AvLo, Cls::HvLo}
             : std::array{Cls::AvLo, Cls::HvHo, Cls::HvLo};
}

// Fill priority maximizing total delay: low-occupancy human drivers first,
// the most commuter-dense class last.
inline std::array<Cls, 3> worst_fill_order(const Scenario& s) {
  return occupancy_vs_inverse_asymmetry(s) > 0
             ? std::array{Cls::HvLo, Cls::AvLo, Cls::HvHo}
             : std::array{Cls::HvLo, Cls::HvHo, Cls::AvLo};
}

// Flow distribution with every choosing class fully on one lane; pinned
// classes always sit at their caps.
inline FlowDistribution pure_point(const Scenario& s, bool choosers_on_lane1) {
  const VehicleCaps u = vehicle_caps(s);
  FlowDistribution f;
  f.hv_lo = choosers_on_lane1 ? u.hv_lo : 0.0;
  f.hv_ho = (choosers_on_lane1 || s.policy.pin_hv_ho) ? u.hv_ho : 0.0;
  f.av_lo = (choosers_on_lane1 || s.policy.pin_av_lo) ? u.av_lo : 0.0;
  return f;
}

}  // namespace tollane::detail
