#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "tollane/design.hpp"
#include "tollane/equilibrium.hpp"

// The OpenMP kernels must reproduce the serial reference bit for bit: every
// grid point is evaluated independently and written by index.

using namespace tollane;
using test_helpers::scenario_n4;

namespace {

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> v(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i)
    v[static_cast<std::size_t>(i)] =
        lo + (hi - lo) * static_cast<double>(i) / (count - 1);
  return v;
}

bool identical(const SweepCurve& a, const SweepCurve& b) {
  return a.parameter == b.parameter && a.j_best == b.j_best &&
         a.j_worst == b.j_worst && a.kind == b.kind;
}

}  // namespace

TEST_CASE("parallel toll sweep equals the serial reference") {
  const Scenario s = scenario_n4();
  const auto taus = linspace(0.0, 1.0, 257);
  CHECK(identical(sweep_toll(s, taus), sweep_toll_serial(s, taus)));
}

TEST_CASE("parallel threshold sweep equals the serial reference") {
  const CarpoolModel cm{9.0, 7.0, [](double n) { return 1.0 / n; }};
  const ScenarioBase base{test_helpers::bpr(3, 1, 1, 10),
                          test_helpers::bpr(3, 1, 1, 10), 0.5, 0.5,
                          LanePolicy{}};
  const auto ns = linspace(2.0, 4.0, 161);
  CHECK(identical(sweep_threshold(cm, base, ns),
                  sweep_threshold_serial(cm, base, ns)));
}

TEST_CASE("parallel brute force equals the serial reference") {
  for (double tau : {0.0, 0.5, 1.0}) {
    const Scenario s = scenario_n4(tau);
    const auto parallel = brute_force_equilibria(s, 24);
    const auto serial = brute_force_equilibria_serial(s, 24);
    CHECK(parallel == serial);
  }

  std::mt19937 rng(61);
  for (int i = 0; i < 5; ++i) {
    const Scenario s = test_helpers::random_small_scenario(rng);
    CHECK(brute_force_equilibria(s, 15) ==
          brute_force_equilibria_serial(s, 15));
  }
}

TEST_CASE("parallel sweeps are deterministic across repeated runs") {
  const Scenario s = scenario_n4();
  const auto taus = linspace(0.0, 1.0, 101);
  const SweepCurve first = sweep_toll(s, taus);
  const SweepCurve second = sweep_toll(s, taus);
  CHECK(identical(first, second));
}
