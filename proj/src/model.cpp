#include "tollane/model.hpp"

#include <cmath>
#include <sstream>

namespace tollane {

namespace {

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

[[noreturn]] void invalid(const std::string& what) {
  throw std::invalid_argument(what);
}

std::string describe(const char* field, double value) {
  std::ostringstream oss;
  oss << field << " = " << value;
  return oss.str();
}

}  // namespace

void DemandProfile::validate() const {
  if (!finite_nonneg(hv_lo)) invalid("demand hv_lo must be finite and >= 0");
  if (!finite_nonneg(hv_ho)) invalid("demand hv_ho must be finite and >= 0");
  if (!finite_nonneg(av_lo)) invalid("demand av_lo must be finite and >= 0");
  if (!finite_nonneg(av_ho)) invalid("demand av_ho must be finite and >= 0");
  if (hv_lo + hv_ho + av_lo + av_ho <= 0.0)
    invalid("at least one commuter demand must be strictly positive");
}

double total_commuters(const DemandProfile& d) {
  return d.hv_lo + d.hv_ho + d.av_lo + d.av_ho;
}

double DelayFunction::operator()(double flow) const {
  const double ratio = flow / capacity;
  // The common BPR exponents avoid pow() for speed and exactness.
  if (exponent == 1.0) return free_flow + gain * ratio;
  if (exponent == 2.0) return free_flow + gain * ratio * ratio;
  return free_flow + gain * std::pow(ratio, exponent);
}

void DelayFunction::validate(const std::string& label) const {
  if (!finite_nonneg(free_flow))
    invalid(label + ".free_flow must be finite and >= 0");
  if (!finite_nonneg(gain)) invalid(label + ".gain must be finite and >= 0");
  if (!(std::isfinite(exponent) && exponent > 0.0))
    invalid(label + ".exponent must be > 0");
  if (!(std::isfinite(capacity) && capacity > 0.0))
    invalid(label + ".capacity must be > 0");
}

void Scenario::validate() const {
  delay_lane1.validate("lane1");
  delay_lane2.validate("lane2");
  demand.validate();
  if (!finite_nonneg(toll)) invalid("toll must be finite and >= 0");
  if (!(std::isfinite(occupancy) && occupancy >= 2.0))
    invalid("occupancy threshold must be >= 2");
  if (!(std::isfinite(asymmetry) && asymmetry > 0.0 && asymmetry < 1.0))
    invalid("capacity asymmetry mu must lie strictly inside (0,1)");
}

VehicleCaps vehicle_caps(const Scenario& s) {
  return {s.demand.hv_lo, s.demand.hv_ho / s.occupancy, s.demand.av_lo,
          s.demand.av_ho / s.occupancy};
}

FlowBounds flow_bounds(const Scenario& s) {
  const VehicleCaps u = vehicle_caps(s);
  const double mu = s.asymmetry;
  double f1_min = mu * u.av_ho;
  if (s.policy.pin_hv_ho) f1_min += u.hv_ho;
  if (s.policy.pin_av_lo) f1_min += mu * u.av_lo;
  // Total effective flow is conserved, so the maximum covers every class
  // regardless of which ones are pinned.
  const double f1_max = u.hv_lo + u.hv_ho + mu * (u.av_lo + u.av_ho);
  return {f1_min, f1_max};
}

namespace {

void check_class(const char* name, double flow, double cap, bool pinned,
                 double tol) {
  if (flow < -tol)
    throw FeasibilityError(std::string("lane-1 flow ") + describe(name, flow) +
                           " violates the lower bound 0");
  if (flow > cap + tol) {
    std::ostringstream oss;
    oss << "lane-1 flow " << name << " = " << flow
        << " exceeds the vehicle demand bound " << cap;
    throw FeasibilityError(oss.str());
  }
  if (pinned && std::abs(flow - cap) > tol) {
    std::ostringstream oss;
    oss << "policy pins " << name << " to lane 1: expected " << cap << ", got "
        << flow;
    throw FeasibilityError(oss.str());
  }
}

}  // namespace

void check_feasible(const Scenario& s, const FlowDistribution& f, double tol) {
  const VehicleCaps u = vehicle_caps(s);
  check_class("hv_lo", f.hv_lo, u.hv_lo, false, tol);
  check_class("hv_ho", f.hv_ho, u.hv_ho, s.policy.pin_hv_ho, tol);
  check_class("av_lo", f.av_lo, u.av_lo, s.policy.pin_av_lo, tol);
}

bool is_feasible(const Scenario& s, const FlowDistribution& f, double tol) {
  try {
    check_feasible(s, f, tol);
  } catch (const FeasibilityError&) {
    return false;
  }
  return true;
}

EffectiveFlows effective_flows(const Scenario& s, const FlowDistribution& f) {
  check_feasible(s, f);
  const VehicleCaps u = vehicle_caps(s);
  const double f1 = f.hv_lo + f.hv_ho + s.asymmetry * (f.av_lo + u.av_ho);
  return {f1, flow_bounds(s).f1_max - f1};
}

TravelCosts travel_costs(const Scenario& s, const FlowDistribution& f) {
  const EffectiveFlows ef = effective_flows(s, f);
  return {s.delay_lane1(ef.lane1) + s.toll, s.delay_lane2(ef.lane2)};
}

double total_delay(const Scenario& s, const FlowDistribution& f) {
  const EffectiveFlows ef = effective_flows(s, f);
  const VehicleCaps u = vehicle_caps(s);
  const double n = s.occupancy;
  const double lane1_commuters = f.hv_lo + f.av_lo + n * (f.hv_ho + u.av_ho);
  const double lane2_commuters =
      (u.hv_lo - f.hv_lo) + (u.av_lo - f.av_lo) + n * (u.hv_ho - f.hv_ho);
  return lane1_commuters * s.delay_lane1(ef.lane1) +
         lane2_commuters * s.delay_lane2(ef.lane2);
}

}  // namespace tollane
