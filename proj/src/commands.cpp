#include "tollane/commands.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "tollane/config.hpp"
#include "tollane/design.hpp"
#include "tollane/equilibrium.hpp"
#include "tollane/policy.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tollane {

namespace {

struct CommonOpts {
  std::string config_path;
  std::string output = "-";
  int threads = 0;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("-c,--config", o.config_path,
                  "scenario configuration file (JSON)")
      ->required();
  cmd->add_option("-o,--output", o.output, "output file, '-' for stdout");
  cmd->add_option("--threads", o.threads,
                  "sweep parallelism degree (0 keeps the runtime default)");
}

void apply_threads(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

class Output {
 public:
  explicit Output(const std::string& spec) {
    if (spec != "-") {
      file_.open(spec, std::ios::binary);
      if (!file_) throw ConfigError(spec + ": cannot open output file");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::string flow_fields(const FlowDistribution& f) {
  return "hv_lo=" + format_number(f.hv_lo) + " hv_ho=" +
         format_number(f.hv_ho) + " av_lo=" + format_number(f.av_lo);
}

Objective parse_objective(const std::string& name) {
  return name == "worst" ? Objective::WorstCase : Objective::BestCase;
}

void write_sweep_csv(std::ostream& out, const char* param_name,
                     const SweepCurve& c, bool with_class) {
  out << param_name << ",j_best,j_worst";
  if (with_class) out << ",class";
  out << "\n";
  for (std::size_t i = 0; i < c.size(); ++i) {
    out << format_number(c.parameter[i]) << ',' << format_number(c.j_best[i])
        << ',' << format_number(c.j_worst[i]);
    if (with_class) out << ',' << to_string(c.kind[i]);
    out << "\n";
  }
}

void cmd_equilibrium(const CommonOpts& o) {
  const ScenarioConfig cfg = load_config(o.config_path);
  const EquilibriumReport r = equilibrium_report(cfg.scenario());
  Output out(o.output);
  auto& os = out.stream();
  os << "classification: " << to_string(r.set.kind) << "\n"
     << "unique: " << (r.set.unique() ? "true" : "false") << "\n"
     << "f1_star: " << format_number(r.set.f1_star) << "\n"
     << "best: " << flow_fields(r.best) << "\n"
     << "worst: " << flow_fields(r.worst) << "\n"
     << "j_best: " << format_number(r.j_best) << "\n"
     << "j_worst: " << format_number(r.j_worst) << "\n";
}

void cmd_sweep_toll(const CommonOpts& o) {
  const ScenarioConfig cfg = load_config(o.config_path);
  if (cfg.sweep.start < 0.0)
    throw ConfigError(o.config_path +
                      ": sweep.start: must be >= 0 for a toll sweep");
  apply_threads(o.threads);
  const auto taus = cfg.sweep.values();
  const SweepCurve c = sweep_toll(cfg.scenario(), taus);
  Output out(o.output);
  write_sweep_csv(out.stream(), "tau", c, true);
}

void cmd_optimize_toll(const CommonOpts& o, const std::string& objective,
                       int grid_steps) {
  const ScenarioConfig cfg = load_config(o.config_path);
  const Optimum opt =
      optimize_toll(cfg.scenario(), parse_objective(objective), grid_steps);
  Output out(o.output);
  out.stream() << "objective: " << objective << "\n"
               << "tau_opt: " << format_number(opt.parameter) << "\n"
               << "j_opt: " << format_number(opt.value) << "\n";
}

void cmd_sweep_n(const CommonOpts& o) {
  const ScenarioConfig cfg = load_config(o.config_path);
  if (cfg.sweep.start < 2.0)
    throw ConfigError(o.config_path +
                      ": sweep.start: must be >= 2 for an occupancy sweep");
  apply_threads(o.threads);
  const auto ns = cfg.sweep.values();
  const SweepCurve c = sweep_threshold(cfg.carpool_model(), cfg.base(), ns);
  Output out(o.output);
  write_sweep_csv(out.stream(), "n", c, false);
}

void cmd_optimize_n(const CommonOpts& o, const std::string& objective,
                    int grid_steps, const std::vector<double>& candidates) {
  const ScenarioConfig cfg = load_config(o.config_path);
  const CarpoolModel cm = cfg.carpool_model();
  const Objective obj = parse_objective(objective);
  Optimum opt;
  if (!candidates.empty()) {
    opt = optimize_threshold(cm, cfg.base(), obj, candidates);
  } else {
    if (cfg.sweep.start < 2.0)
      throw ConfigError(o.config_path +
                        ": sweep.start: must be >= 2 for an occupancy range");
    opt = optimize_threshold(cm, cfg.base(), obj, cfg.sweep.start,
                             cfg.sweep.stop, grid_steps);
  }
  Output out(o.output);
  out.stream() << "objective: " << objective << "\n"
               << "n_opt: " << format_number(opt.parameter) << "\n"
               << "j_opt: " << format_number(opt.value) << "\n";
}

void cmd_compare_policy(const CommonOpts& o) {
  const ScenarioConfig cfg = load_config(o.config_path);
  if (cfg.sweep.start < 0.0)
    throw ConfigError(o.config_path +
                      ": sweep.start: must be >= 0 for a toll sweep");
  if (!cfg.demand)
    throw ConfigError(o.config_path +
                      ": demand: block is required for compare-policy");
  apply_threads(o.threads);
  const auto taus = cfg.sweep.values();
  const PolicyComparison cmp = compare_policies(
      *cfg.demand, cfg.lane1, cfg.lane2, cfg.occupancy, cfg.mu, taus);
  Output out(o.output);
  auto& os = out.stream();
  os << "tau,hovl_j_best,hovl_j_worst,dla_j_best,dla_j_worst\n";
  for (std::size_t i = 0; i < cmp.hovl.size(); ++i) {
    os << format_number(cmp.hovl.parameter[i]) << ','
       << format_number(cmp.hovl.j_best[i]) << ','
       << format_number(cmp.hovl.j_worst[i]) << ','
       << format_number(cmp.dla.j_best[i]) << ','
       << format_number(cmp.dla.j_worst[i]) << "\n";
  }
}

void cmd_differentiate(const CommonOpts& o, double delta) {
  const ScenarioConfig cfg = load_config(o.config_path);
  const Scenario s = cfg.scenario();
  const VectorToll vt = differentiate_tolls(s, s.toll, delta);
  const VectorTollEquilibrium v = verify_vector_toll(s, vt);
  Output out(o.output);
  auto& os = out.stream();
  os << "tau_star: " << format_number(s.toll) << "\n"
     << "delta: " << format_number(delta) << "\n"
     << "vector_toll: hv_lo=" << format_number(vt.hv_lo)
     << " hv_ho=" << format_number(vt.hv_ho)
     << " av_lo=" << format_number(vt.av_lo) << "\n"
     << "unique: " << (v.unique ? "true" : "false") << "\n"
     << "flow: " << flow_fields(v.flow) << "\n"
     << "j: " << format_number(v.j) << "\n";
  if (!v.unique)
    os << "j_best: " << format_number(v.j_best) << "\n"
       << "j_worst: " << format_number(v.j_worst) << "\n";
}

}  // namespace

int run_command(const std::vector<std::string>& args) {
  CLI::App app{"Reserved toll lane equilibrium solver and design toolkit",
               "tollane"};
  app.require_subcommand(1);

  CommonOpts common;
  std::string objective = "best";
  int grid_steps = 101;
  double delta = 0.05;
  std::vector<double> candidates;

  CLI::App* eq = app.add_subcommand(
      "equilibrium", "print the lane choice equilibrium report");
  add_common(eq, common);
  eq->callback([&] { cmd_equilibrium(common); });

  CLI::App* st = app.add_subcommand(
      "sweep-toll", "CSV of best/worst total delay over the toll grid");
  add_common(st, common);
  st->callback([&] { cmd_sweep_toll(common); });

  CLI::App* ot = app.add_subcommand(
      "optimize-toll", "search the toll minimizing the total delay");
  add_common(ot, common);
  ot->add_option("--objective", objective, "best or worst case objective")
      ->check(CLI::IsMember({"best", "worst"}));
  ot->add_option("--grid-steps", grid_steps, "coarse scan resolution");
  ot->callback([&] { cmd_optimize_toll(common, objective, grid_steps); });

  CLI::App* sn = app.add_subcommand(
      "sweep-n", "CSV of best/worst total delay over the occupancy grid");
  add_common(sn, common);
  sn->callback([&] { cmd_sweep_n(common); });

  CLI::App* on = app.add_subcommand(
      "optimize-n", "search the occupancy threshold minimizing total delay");
  add_common(on, common);
  on->add_option("--objective", objective, "best or worst case objective")
      ->check(CLI::IsMember({"best", "worst"}));
  on->add_option("--grid-steps", grid_steps, "coarse scan resolution");
  on->add_option("--candidate", candidates,
                 "discrete occupancy candidate (repeatable)");
  on->callback(
      [&] { cmd_optimize_n(common, objective, grid_steps, candidates); });

  CLI::App* cp = app.add_subcommand(
      "compare-policy",
      "CSV comparing the HOV-lane and dedicated-AV-lane policies");
  add_common(cp, common);
  cp->callback([&] { cmd_compare_policy(common); });

  CLI::App* df = app.add_subcommand(
      "differentiate",
      "per-class tolls steering the equilibrium to the best case");
  add_common(df, common);
  df->add_option("--delta", delta, "toll offset for the non-marginal classes");
  df->callback([&] { cmd_differentiate(common, delta); });

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("tollane");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const FeasibilityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

}  // namespace tollane
