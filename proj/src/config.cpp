#include "tollane/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "tollane/policy.hpp"

namespace tollane {

using ordered_json = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& origin, const std::string& path,
                       const std::string& what) {
  throw ConfigError(origin + ": " + path + ": " + what);
}

std::string join(const std::string& path, const char* key) {
  return path.empty() ? key : path + "." + key;
}

const ordered_json& member(const ordered_json& j, const std::string& path,
                           const char* key, const std::string& origin) {
  const auto it = j.find(key);
  if (it == j.end()) fail(origin, join(path, key), "missing required field");
  return *it;
}

void reject_unknown(const ordered_json& j, const std::string& path,
                    std::initializer_list<const char*> known,
                    const std::string& origin) {
  for (const auto& [key, value] : j.items()) {
    if (std::find_if(known.begin(), known.end(), [&](const char* k) {
          return key == k;
        }) == known.end())
      fail(origin, join(path, key.c_str()), "unknown field");
  }
}

double number_at(const ordered_json& j, const std::string& path,
                 const std::string& origin) {
  if (!j.is_number()) fail(origin, path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(origin, path, "value must be finite");
  return v;
}

double number_field(const ordered_json& j, const std::string& path,
                    const char* key, const std::string& origin) {
  return number_at(member(j, path, key, origin), join(path, key), origin);
}

void require_object(const ordered_json& j, const std::string& path,
                    const std::string& origin) {
  if (!j.is_object()) fail(origin, path, "expected an object");
}

DemandProfile parse_demand(const ordered_json& j, const std::string& path,
                           const std::string& origin) {
  require_object(j, path, origin);
  reject_unknown(j, path, {"hv_lo", "hv_ho", "av_lo", "av_ho"}, origin);
  DemandProfile d;
  d.hv_lo = number_field(j, path, "hv_lo", origin);
  d.hv_ho = number_field(j, path, "hv_ho", origin);
  d.av_lo = number_field(j, path, "av_lo", origin);
  d.av_ho = number_field(j, path, "av_ho", origin);
  const auto check = [&](double v, const char* key) {
    if (v < 0.0) fail(origin, join(path, key), "demand must be >= 0");
  };
  check(d.hv_lo, "hv_lo");
  check(d.hv_ho, "hv_ho");
  check(d.av_lo, "av_lo");
  check(d.av_ho, "av_ho");
  if (total_commuters(d) <= 0.0)
    fail(origin, path, "at least one demand must be strictly positive");
  return d;
}

DelayFunction parse_delay(const ordered_json& j, const std::string& path,
                          const std::string& origin) {
  require_object(j, path, origin);
  reject_unknown(j, path, {"free_flow", "gain", "exponent", "capacity"},
                 origin);
  DelayFunction d;
  d.free_flow = number_field(j, path, "free_flow", origin);
  d.gain = number_field(j, path, "gain", origin);
  d.exponent = number_field(j, path, "exponent", origin);
  d.capacity = number_field(j, path, "capacity", origin);
  if (d.free_flow < 0.0)
    fail(origin, join(path, "free_flow"), "must be >= 0");
  if (d.gain < 0.0) fail(origin, join(path, "gain"), "must be >= 0");
  if (d.exponent <= 0.0) fail(origin, join(path, "exponent"), "must be > 0");
  if (d.capacity <= 0.0) fail(origin, join(path, "capacity"), "must be > 0");
  return d;
}

SweepRange parse_sweep(const ordered_json& j, const std::string& path,
                       const std::string& origin) {
  require_object(j, path, origin);
  reject_unknown(j, path, {"start", "stop", "steps"}, origin);
  SweepRange r;
  r.start = number_field(j, path, "start", origin);
  r.stop = number_field(j, path, "stop", origin);
  const ordered_json& steps = member(j, path, "steps", origin);
  if (!steps.is_number_integer())
    fail(origin, join(path, "steps"), "expected an integer");
  r.steps = steps.get<int>();
  if (r.steps < 1) fail(origin, join(path, "steps"), "must be >= 1");
  if (r.steps > 1 && !(r.stop > r.start))
    fail(origin, join(path, "stop"), "must be greater than start");
  return r;
}

CarpoolSpec parse_carpool(const ordered_json& j, const std::string& path,
                          const std::string& origin) {
  require_object(j, path, origin);
  reject_unknown(j, path, {"hv_total", "av_total", "prob"}, origin);
  CarpoolSpec c;
  c.hv_total = number_field(j, path, "hv_total", origin);
  c.av_total = number_field(j, path, "av_total", origin);
  if (c.hv_total < 0.0) fail(origin, join(path, "hv_total"), "must be >= 0");
  if (c.av_total < 0.0) fail(origin, join(path, "av_total"), "must be >= 0");
  if (c.hv_total + c.av_total <= 0.0)
    fail(origin, path, "commuter totals must not both be zero");

  const ordered_json& prob = member(j, path, "prob", origin);
  const std::string prob_path = join(path, "prob");
  if (prob.is_string()) {
    if (prob.get<std::string>() != "reciprocal")
      fail(origin, prob_path, "unknown probability kind (use \"reciprocal\")");
    c.reciprocal = true;
    return c;
  }
  if (!prob.is_array())
    fail(origin, prob_path, "expected \"reciprocal\" or an [n, p] table");
  c.reciprocal = false;
  for (std::size_t i = 0; i < prob.size(); ++i) {
    std::ostringstream row;
    row << prob_path << "[" << i << "]";
    const ordered_json& entry = prob[i];
    if (!entry.is_array() || entry.size() != 2)
      fail(origin, row.str(), "expected an [n, p] pair");
    const double n = number_at(entry[0], row.str(), origin);
    const double p = number_at(entry[1], row.str(), origin);
    if (n < 2.0) fail(origin, row.str(), "occupancy must be >= 2");
    if (p < 0.0 || p > 1.0)
      fail(origin, row.str(), "probability must lie in [0,1]");
    if (!c.table.empty()) {
      if (n <= c.table.back().first)
        fail(origin, row.str(), "occupancy values must be strictly ascending");
      if (p > c.table.back().second)
        fail(origin, row.str(), "probabilities must be non-increasing");
    }
    c.table.emplace_back(n, p);
  }
  if (c.table.empty()) fail(origin, prob_path, "table must not be empty");
  return c;
}

}  // namespace

std::vector<double> SweepRange::values() const {
  std::vector<double> v(static_cast<std::size_t>(steps));
  if (steps == 1) {
    v[0] = start;
    return v;
  }
  for (int i = 0; i < steps; ++i)
    v[static_cast<std::size_t>(i)] =
        start + (stop - start) * static_cast<double>(i) / (steps - 1);
  return v;
}

CarpoolModel CarpoolSpec::model() const {
  CarpoolModel m{hv_total, av_total, {}};
  if (reciprocal) {
    m.carpool_prob = [](double n) { return 1.0 / n; };
    return m;
  }
  m.carpool_prob = [rows = table](double n) {
    if (n <= rows.front().first) return rows.front().second;
    if (n >= rows.back().first) return rows.back().second;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      if (n <= rows[i].first) {
        const auto& [n0, p0] = rows[i - 1];
        const auto& [n1, p1] = rows[i];
        return p0 + (p1 - p0) * (n - n0) / (n1 - n0);
      }
    }
    return rows.back().second;
  };
  return m;
}

Scenario ScenarioConfig::scenario() const {
  if (!demand)
    throw ConfigError(
        "demand: block is required for this command (only carpool-derived "
        "demands were configured)");
  return {lane1, lane2, *demand, toll, occupancy, mu, make_policy(policy)};
}

ScenarioBase ScenarioConfig::base() const {
  return {lane1, lane2, toll, mu, make_policy(policy)};
}

CarpoolModel ScenarioConfig::carpool_model() const {
  if (!carpool)
    throw ConfigError("carpool: block is required for this command");
  return carpool->model();
}

ScenarioConfig parse_config(const std::string& text,
                            const std::string& origin) {
  ordered_json root;
  try {
    root = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  require_object(root, "(root)", origin);
  reject_unknown(root, "",
                 {"demand", "lane1", "lane2", "toll", "occupancy", "mu",
                  "policy", "sweep", "carpool"},
                 origin);

  ScenarioConfig cfg;
  if (root.contains("demand"))
    cfg.demand = parse_demand(root["demand"], "demand", origin);
  cfg.lane1 = parse_delay(member(root, "", "lane1", origin), "lane1", origin);
  cfg.lane2 = parse_delay(member(root, "", "lane2", origin), "lane2", origin);
  cfg.toll = number_field(root, "", "toll", origin);
  if (cfg.toll < 0.0) fail(origin, "toll", "must be >= 0");
  cfg.occupancy = number_field(root, "", "occupancy", origin);
  if (cfg.occupancy < 2.0) fail(origin, "occupancy", "must be >= 2");
  cfg.mu = number_field(root, "", "mu", origin);
  if (!(cfg.mu > 0.0 && cfg.mu < 1.0))
    fail(origin, "mu", "must lie strictly inside (0,1)");

  if (root.contains("policy")) {
    const ordered_json& p = root["policy"];
    if (!p.is_string()) fail(origin, "policy", "expected a string");
    const std::string name = p.get<std::string>();
    if (name == "baseline") cfg.policy = PolicyKind::Baseline;
    else if (name == "hovl") cfg.policy = PolicyKind::Hovl;
    else if (name == "dla") cfg.policy = PolicyKind::Dla;
    else fail(origin, "policy", "must be one of baseline, hovl, dla");
  }
  if (root.contains("sweep"))
    cfg.sweep = parse_sweep(root["sweep"], "sweep", origin);
  if (root.contains("carpool"))
    cfg.carpool = parse_carpool(root["carpool"], "carpool", origin);
  if (!cfg.demand && !cfg.carpool)
    fail(origin, "(root)", "config needs a demand or a carpool block");
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

std::string serialize_config(const ScenarioConfig& cfg) {
  ordered_json root;
  if (cfg.demand) {
    root["demand"] = {{"hv_lo", cfg.demand->hv_lo},
                      {"hv_ho", cfg.demand->hv_ho},
                      {"av_lo", cfg.demand->av_lo},
                      {"av_ho", cfg.demand->av_ho}};
  }
  const auto delay = [](const DelayFunction& d) {
    return ordered_json{{"free_flow", d.free_flow},
                        {"gain", d.gain},
                        {"exponent", d.exponent},
                        {"capacity", d.capacity}};
  };
  root["lane1"] = delay(cfg.lane1);
  root["lane2"] = delay(cfg.lane2);
  root["toll"] = cfg.toll;
  root["occupancy"] = cfg.occupancy;
  root["mu"] = cfg.mu;
  root["policy"] = to_string(cfg.policy);
  root["sweep"] = {{"start", cfg.sweep.start},
                   {"stop", cfg.sweep.stop},
                   {"steps", cfg.sweep.steps}};
  if (cfg.carpool) {
    ordered_json c{{"hv_total", cfg.carpool->hv_total},
                   {"av_total", cfg.carpool->av_total}};
    if (cfg.carpool->reciprocal) {
      c["prob"] = "reciprocal";
    } else {
      ordered_json rows = ordered_json::array();
      for (const auto& [n, p] : cfg.carpool->table)
        rows.push_back({n, p});
      c["prob"] = rows;
    }
    root["carpool"] = c;
  }
  return root.dump(2) + "\n";
}

std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[40];
  for (int prec = 1; prec <= 12; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace tollane
