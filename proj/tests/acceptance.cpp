// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Run via ctest or directly as tests/acceptance.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "tollane/design.hpp"
#include "tollane/equilibrium.hpp"
#include "tollane/policy.hpp"

using namespace tollane;
using test_helpers::near;
using test_helpers::scenario_n2;
using test_helpers::scenario_n4;

namespace {

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> v(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i)
    v[static_cast<std::size_t>(i)] =
        lo + (hi - lo) * static_cast<double>(i) / (count - 1);
  return v;
}

std::string fmt(double v) {
  std::ostringstream oss;
  oss.precision(12);
  oss << v;
  return oss.str();
}

bool flow_matches(const FlowDistribution& f, double hv_lo, double hv_ho,
                  double av_lo, double tol) {
  return near(f.hv_lo, hv_lo, tol) && near(f.hv_ho, hv_ho, tol) &&
         near(f.av_lo, av_lo, tol);
}

// 1. The uniqueness thresholds of the worked example: 0.7 and 0.74.
bool criterion_thresholds(std::string& detail) {
  const double t4 = uniqueness_thresholds(scenario_n4()).all_lane2_min;
  const double t2 = uniqueness_thresholds(scenario_n2()).all_lane2_min;
  detail = "thresholds " + fmt(t4) + " and " + fmt(t2);
  return near(t4, 0.7, 1e-9) && near(t2, 0.74, 1e-9);
}

// 2. Best/worst equilibria at toll 0.5 in both parameterizations.
bool criterion_best_worst(std::string& detail) {
  const EquilibriumReport r4 = equilibrium_report(scenario_n4(0.5));
  const EquilibriumReport r2 = equilibrium_report(scenario_n2(0.5));
  detail = "n=4 best (" + fmt(r4.best.hv_lo) + ", " + fmt(r4.best.hv_ho) +
           ", " + fmt(r4.best.av_lo) + "), n=2 best (" + fmt(r2.best.hv_lo) +
           ", " + fmt(r2.best.hv_ho) + ", " + fmt(r2.best.av_lo) + ")";
  return flow_matches(r4.best, 0.0, 1.0, 0.0, 1e-8) &&
         flow_matches(r4.worst, 1.0, 0.0, 0.0, 1e-8) &&
         flow_matches(r2.best, 0.0, 0.0, 3.0, 1e-8) &&
         flow_matches(r2.worst, 1.2, 0.0, 0.0, 1e-8);
}

// 3. Toll-curve shape on the 0.01 grid: worst nondecreasing, best-case
//    argmin in [0.20, 0.30], worst-case argmin at zero.
bool criterion_toll_curve(std::string& detail) {
  const SweepCurve c = sweep_toll(scenario_n4(), linspace(0.0, 1.0, 101));
  std::size_t best_arg = 0;
  std::size_t worst_arg = 0;
  bool nondecreasing = true;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i > 0 && c.j_worst[i] < c.j_worst[i - 1] - 1e-9) nondecreasing = false;
    if (c.j_best[i] < c.j_best[best_arg]) best_arg = i;
    if (c.j_worst[i] < c.j_worst[worst_arg]) worst_arg = i;
  }
  detail = "best argmin tau=" + fmt(c.parameter[best_arg]) +
           ", worst argmin tau=" + fmt(c.parameter[worst_arg]);
  return nondecreasing && c.parameter[best_arg] >= 0.20 &&
         c.parameter[best_arg] <= 0.30 && worst_arg == 0;
}

// 4. HOV-lane policy dominates the dedicated-AV-lane policy pointwise.
bool criterion_policy_dominance(std::string& detail) {
  const Scenario s = scenario_n4();
  const auto taus = linspace(0.0, 1.0, 101);
  const PolicyComparison cmp = compare_policies(
      s.demand, s.delay_lane1, s.delay_lane2, s.occupancy, s.asymmetry, taus);
  double worst_gap = 0.0;
  bool ok = true;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    const double gap = cmp.hovl.j_best[i] - cmp.dla.j_best[i];
    worst_gap = std::max(worst_gap, gap);
    if (gap > 1e-9) ok = false;
  }
  detail = "max(hovl - dla) = " + fmt(worst_gap);
  return ok;
}

// 5. Raising the occupancy threshold does not monotonically improve the
//    best-case delay in the carpool study.
bool criterion_threshold_shape(std::string& detail) {
  const CarpoolModel cm{9.0, 7.0, [](double n) { return 1.0 / n; }};
  const ScenarioBase base{test_helpers::bpr(3, 1, 1, 10),
                          test_helpers::bpr(3, 1, 1, 10), 0.5, 0.5,
                          LanePolicy{}};
  const SweepCurve c = sweep_threshold(cm, base, linspace(2.0, 4.0, 41));
  int increases = 0;
  for (std::size_t i = 1; i < c.size(); ++i)
    if (c.j_best[i] > c.j_best[i - 1] + 1e-9) ++increases;
  detail = std::to_string(increases) + " consecutive increases";
  return increases >= 1;
}

// 6. Differentiated tolls reproduce the uniform best-case delay.
bool criterion_vector_toll(std::string& detail) {
  std::mt19937 rng(101);
  int accepted = 0;
  double max_err = 0.0;
  for (int i = 0; i < 4000 && accepted < 50; ++i) {
    const Scenario s = test_helpers::random_small_scenario(rng);
    const Optimum opt = optimize_toll(s, Objective::BestCase);
    if (opt.parameter <= 1e-6) continue;
    Scenario at = s;
    at.toll = opt.parameter;
    if (uniqueness_class(at) != Classification::Interior) continue;
    ++accepted;
    const VectorToll vt = differentiate_tolls(s, opt.parameter, 0.05);
    const VectorTollEquilibrium v = verify_vector_toll(s, vt);
    const double err = std::abs(v.j - equilibrium_report(at).j_best);
    max_err = std::max(max_err, err);
    if (err > 1e-6 || !v.unique) {
      detail = "scenario " + std::to_string(accepted) + " err " + fmt(err);
      return false;
    }
  }
  detail = std::to_string(accepted) + " scenarios, max |J - J*| = " +
           fmt(max_err);
  return accepted == 50;
}

// 7. Brute-force oracle equivalence on 100 random scenarios.
bool criterion_oracle(std::string& detail) {
  const auto started = std::chrono::steady_clock::now();
  std::mt19937 rng(103);
  const int steps = 60;
  double max_rel = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Scenario s = test_helpers::random_small_scenario(rng);
    const EquilibriumReport r = equilibrium_report(s);
    for (const FlowDistribution& f : {r.best, r.worst}) {
      if (!wardrop_check(s, f, 1e-9)) {
        detail = "report point fails the equilibrium check (scenario " +
                 std::to_string(i) + ")";
        return false;
      }
    }
    const auto points = brute_force_equilibria(s, steps);
    if (points.empty()) {
      detail = "oracle found no equilibria (scenario " + std::to_string(i) +
               ")";
      return false;
    }
    double j_lo = total_delay(s, points.front());
    double j_hi = j_lo;
    for (const FlowDistribution& f : points) {
      const double j = total_delay(s, f);
      j_lo = std::min(j_lo, j);
      j_hi = std::max(j_hi, j);
    }
    const double slack = test_helpers::oracle_delay_slack(s, steps);
    if (!near(j_lo, r.j_best, slack) || !near(j_hi, r.j_worst, slack)) {
      detail = "scenario " + std::to_string(i) + ": oracle [" + fmt(j_lo) +
               ", " + fmt(j_hi) + "] vs report [" + fmt(r.j_best) + ", " +
               fmt(r.j_worst) + "], slack " + fmt(slack);
      return false;
    }
    max_rel = std::max(max_rel, std::abs(j_lo - r.j_best) / slack);
    max_rel = std::max(max_rel, std::abs(j_hi - r.j_worst) / slack);
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                    started)
          .count();
  detail = "100 scenarios in " + fmt(seconds) + "s, worst slack use " +
           fmt(max_rel);
  return seconds < 60.0;
}

// 8. The selected best/worst equilibria bracket uniform simplex samples.
bool criterion_simplex_ordering(std::string& detail) {
  std::mt19937 rng(107);
  for (int i = 0; i < 20; ++i) {
    const Scenario s = test_helpers::random_interior_scenario(rng);
    const EquilibriumReport r = equilibrium_report(s);
    for (int k = 0; k < 1000; ++k) {
      const auto f = test_helpers::sample_simplex(s, r.set.f1_star, rng);
      if (!f) {
        detail = "sampling failed (scenario " + std::to_string(i) + ")";
        return false;
      }
      const double j = total_delay(s, *f);
      if (j < r.j_best - 1e-9 || j > r.j_worst + 1e-9) {
        detail = "sample J " + fmt(j) + " outside [" + fmt(r.j_best) + ", " +
                 fmt(r.j_worst) + "] (scenario " + std::to_string(i) + ")";
        return false;
      }
    }
  }
  detail = "20 scenarios x 1000 samples bracketed";
  return true;
}

struct Criterion {
  const char* name;
  std::function<bool(std::string&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"uniqueness thresholds 0.7 / 0.74", criterion_thresholds},
      {"best/worst equilibria of the worked example", criterion_best_worst},
      {"toll curve shape and argmin positions", criterion_toll_curve},
      {"HOVL dominates DLA on the toll grid", criterion_policy_dominance},
      {"threshold sweep is not monotone decreasing",
       criterion_threshold_shape},
      {"vector tolls recover the uniform best case", criterion_vector_toll},
      {"brute-force oracle equivalence", criterion_oracle},
      {"simplex ordering under random sampling", criterion_simplex_ordering},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    std::string detail;
    bool ok = false;
    try {
      ok = criteria[i].run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %zu: %s%s%s\n", ok ? "PASS" : "FAIL", i + 1,
                criteria[i].name, detail.empty() ? "" : " -- ",
                detail.c_str());
    if (!ok) ++failures;
  }
  if (failures > 0)
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  else
    std::printf("all %zu criteria passed\n", criteria.size());
  return failures == 0 ? 0 : 1;
}
