#include "tollane/policy.hpp"

namespace tollane {

std::string to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::Baseline: return "baseline";
    case PolicyKind::Hovl: return "hovl";
    case PolicyKind::Dla: return "dla";
  }
  return "?";
}

LanePolicy make_policy(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::Baseline: return {};
    case PolicyKind::Hovl: return {.pin_hv_ho = true, .pin_av_lo = false};
    case PolicyKind::Dla: return {.pin_hv_ho = false, .pin_av_lo = true};
  }
  return {};
}

PolicyComparison compare_policies(const DemandProfile& demand,
                                  const DelayFunction& delay_lane1,
                                  const DelayFunction& delay_lane2,
                                  double occupancy, double asymmetry,
                                  std::span<const double> taus) {
  Scenario s{delay_lane1, delay_lane2, demand, 0.0,
             occupancy,   asymmetry,   {}};
  s.policy = make_policy(PolicyKind::Hovl);
  PolicyComparison cmp;
  cmp.hovl = sweep_toll(s, taus);
  s.policy = make_policy(PolicyKind::Dla);
  cmp.dla = sweep_toll(s, taus);
  return cmp;
}

}  // namespace tollane
