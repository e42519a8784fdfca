#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tollane/design.hpp"
#include "tollane/model.hpp"

namespace tollane {

// Raised for malformed or out-of-range configuration input. Messages carry
// the offending field path.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SweepRange {
  double start = 0.0;
  double stop = 1.0;
  int steps = 101;

  std::vector<double> values() const;
  bool operator==(const SweepRange&) const = default;
};

// Carpool model specification: either p(n) = 1/n or an explicit (n, p)
// table, interpolated linearly and clamped at the ends.
struct CarpoolSpec {
  double hv_total = 0.0;
  double av_total = 0.0;
  bool reciprocal = true;
  std::vector<std::pair<double, double>> table;

  CarpoolModel model() const;
  bool operator==(const CarpoolSpec&) const = default;
};

// Textual mirror of a Scenario plus sweep parameters. The demand block may
// be omitted when a carpool block derives the demands instead.
struct ScenarioConfig {
  std::optional<DemandProfile> demand;
  DelayFunction lane1;
  DelayFunction lane2;
  double toll = 0.0;
  double occupancy = 2.0;
  double mu = 0.5;
  PolicyKind policy = PolicyKind::Baseline;
  SweepRange sweep;
  std::optional<CarpoolSpec> carpool;

  Scenario scenario() const;        // throws ConfigError when demand missing
  ScenarioBase base() const;
  CarpoolModel carpool_model() const;  // throws ConfigError when missing
  bool operator==(const ScenarioConfig&) const = default;
};

ScenarioConfig parse_config(const std::string& text,
                            const std::string& origin);
ScenarioConfig load_config(const std::string& path);

// Emits JSON that parses back to an identical config.
std::string serialize_config(const ScenarioConfig& cfg);

/// Shortest decimal form that parses back to the value, capped at 12
/// significant digits.
std::string format_number(double v);

}  // namespace tollane
