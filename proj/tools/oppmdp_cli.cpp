// Command-line driver: run, sweep, heuristic, oracle.
//
// Exit codes: 0 ok, 2 configuration error, 3 numeric failure during a run.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "oppmdp/baselines/heuristics.hpp"
#include "oppmdp/core/finite_instance.hpp"
#include "oppmdp/envs/robot.hpp"
#include "oppmdp/experiment/experiment.hpp"
#include "oppmdp/oracle/oracle.hpp"

namespace {

using oppmdp::experiment::ExperimentConfig;

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

// Flags bound to scratch values; only the ones given on the command line are
// copied over the config loaded from --config.
struct RunFlags {
  std::string config_path;
  ExperimentConfig scratch;
  std::string redirect = "on";
  std::vector<std::pair<CLI::Option*, std::function<void(ExperimentConfig&)>>> setters;

  template <class T>
  void add(CLI::App* app, const std::string& name, T& slot, const std::string& help,
           std::function<void(ExperimentConfig&)> apply) {
    setters.emplace_back(app->add_option(name, slot, help), std::move(apply));
  }

  void attach(CLI::App* app, bool with_sweep) {
    app->add_option("--config", config_path, "JSON config or run manifest");
    ExperimentConfig& s = scratch;
    add(app, "--env", s.env, "robot | synthetic", [&s](auto& c) { c.env = s.env; });
    add(app, "--instance", s.instance, "instance JSON (env=synthetic)",
        [&s](auto& c) { c.instance = s.instance; });
    add(app, "--u", s.u, "cell-16 reward range", [&s](auto& c) { c.u = s.u; });
    add(app, "--V", s.v, "penalty weight", [&s](auto& c) { c.v = s.v; });
    add(app, "--alpha", s.alpha, "K-L weight", [&s](auto& c) { c.alpha = s.alpha; });
    add(app, "--T", s.horizon, "slots", [&s](auto& c) { c.horizon = s.horizon; });
    add(app, "--seed", s.seed, "master seed", [&s](auto& c) { c.seed = s.seed; });
    setters.emplace_back(app->add_option("--redirect", redirect, "on | off")
                             ->check(CLI::IsMember({"on", "off"})),
                         [this](auto& c) { c.redirect = redirect == "on"; });
    add(app, "--gamma", s.redirect_params.gamma, "redirect EMA weight",
        [&s](auto& c) { c.redirect_params.gamma = s.redirect_params.gamma; });
    add(app, "--theta-high", s.redirect_params.theta_high, "redirect trigger (actual)",
        [&s](auto& c) { c.redirect_params.theta_high = s.redirect_params.theta_high; });
    add(app, "--theta-low", s.redirect_params.theta_low, "redirect trigger (virtual)",
        [&s](auto& c) { c.redirect_params.theta_low = s.redirect_params.theta_low; });
    setters.emplace_back(app->add_flag("--power", s.power_constraint, "enable the power constraint"),
                         [&s](auto& c) { c.power_constraint = s.power_constraint; });
    add(app, "--power-budget", s.power_budget, "average power budget",
        [&s](auto& c) { c.power_budget = s.power_budget; });
    add(app, "--out", s.out_dir, "output directory", [&s](auto& c) { c.out_dir = s.out_dir; });
    add(app, "--checkpoint-every", s.checkpoint_every, "slots between CSV rows",
        [&s](auto& c) { c.checkpoint_every = s.checkpoint_every; });
    add(app, "--kernels", s.kernels, "auto | scalar | avx2", [&s](auto& c) { c.kernels = s.kernels; });
    if (with_sweep) {
      add(app, "--seeds", s.seeds_per_point, "replicates per point",
          [&s](auto& c) { c.seeds_per_point = s.seeds_per_point; });
      add(app, "--workers", s.workers, "concurrent runs", [&s](auto& c) { c.workers = s.workers; });
    }
  }

  ExperimentConfig resolve() const {
    ExperimentConfig c = config_path.empty() ? ExperimentConfig{} : ExperimentConfig::load(config_path);
    for (const auto& [opt, apply] : setters)
      if (opt->count() > 0) apply(c);
    return c;
  }
};

void print_summary(const ExperimentConfig& c, const oppmdp::experiment::RunOutcome& o) {
  nlohmann::json j = oppmdp::experiment::manifest(c, o);
  j.erase("config");
  std::cout << j.dump(2) << '\n';
}

int cmd_run(const RunFlags& flags) {
  const ExperimentConfig c = flags.resolve();
  const auto outcome = oppmdp::experiment::run(c);
  if (!c.out_dir.empty()) oppmdp::experiment::write_artifacts(c, outcome, c.out_dir);
  print_summary(c, outcome);
  return 0;
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw oppmdp::ConfigError("bad sweep value '" + item + "'");
    }
  }
  return out;
}

int cmd_sweep(const RunFlags& flags, const std::string& parameter, const std::string& values,
              const std::string& csv_path) {
  ExperimentConfig c = flags.resolve();
  const auto rows = oppmdp::experiment::sweep(c, parameter, parse_values(values));
  if (csv_path.empty()) {
    oppmdp::experiment::write_sweep_csv(std::cout, rows);
  } else {
    std::ofstream out(csv_path);
    if (!out) throw oppmdp::ConfigError("cannot write " + csv_path);
    oppmdp::experiment::write_sweep_csv(out, rows);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Layered drift-plus-penalty learner for opportunistic MDPs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", oppmdp::experiment::version());

  RunFlags run_flags;
  CLI::App* run = app.add_subcommand("run", "one learner run");
  run_flags.attach(run, false);

  RunFlags sweep_flags;
  std::string parameter, values, csv_path;
  CLI::App* sweep = app.add_subcommand("sweep", "parameter sweep over alpha, V or u");
  sweep_flags.attach(sweep, true);
  sweep->add_option("--param", parameter, "alpha | V | u")->required();
  sweep->add_option("--values", values, "comma-separated values")->required();
  sweep->add_option("--csv", csv_path, "aggregated CSV (default stdout)");

  oppmdp::baselines::HeuristicConfig hc;
  double budget = 0.0;
  std::uint64_t simulate = 0, hseed = 1;
  CLI::App* heuristic = app.add_subcommand("heuristic", "renewal-reward heuristics");
  heuristic->add_option("--which", hc.which, "1, 2 or 3");
  heuristic->add_option("--u", hc.u, "cell-16 reward range");
  heuristic->add_option("--resolution", hc.resolution, "grid step as a fraction of the range");
  auto* budget_opt = heuristic->add_option("--power-budget", budget, "H2 average power budget");
  heuristic->add_option("--simulate", simulate, "also simulate the policy for this many slots");
  heuristic->add_option("--seed", hseed, "simulation seed");

  std::string oracle_instance;
  oppmdp::OracleOptions oracle_options;
  CLI::App* oracle = app.add_subcommand("oracle", "brute-force c0* for a finite instance");
  oracle->add_option("--instance", oracle_instance, "instance JSON")->required();
  oracle->add_option("--max-policies", oracle_options.max_policies, "enumeration guard");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return cmd_run(run_flags);
    if (*sweep) return cmd_sweep(sweep_flags, parameter, values, csv_path);
    if (*heuristic) {
      if (budget_opt->count() > 0) hc.power_budget = budget;
      const auto value = oppmdp::baselines::heuristic_value(hc);
      nlohmann::json j = value.to_json();
      j["which"] = hc.which;
      j["u"] = hc.u;
      if (simulate > 0) {
        oppmdp::robot::RobotConfig rc;
        rc.u = hc.u;
        const oppmdp::robot::RobotEnv env(rc);
        oppmdp::RngStreams rng(hseed);
        const auto sim = oppmdp::baselines::heuristic_simulate(hc, value.thresholds, env, rng.w, simulate);
        j["simulated"] = {{"T", simulate}, {"reward", sim.reward}, {"power", sim.power}};
      }
      std::cout << j.dump(2) << '\n';
      return 0;
    }
    if (*oracle) {
      const auto inst = oppmdp::FiniteInstance::load(oracle_instance);
      std::cout << oppmdp::solve_unconstrained(inst, oracle_options).to_json().dump(2) << '\n';
      return 0;
    }
  } catch (const oppmdp::NumericError& e) {
    std::cerr << "numeric error at slot " << e.slot() << ": " << e.what() << '\n';
    return kExitNumeric;
  } catch (const oppmdp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const oppmdp::InstanceTooLarge& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
