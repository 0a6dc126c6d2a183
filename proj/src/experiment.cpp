#include "oppmdp/experiment/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include "oppmdp/core/finite_instance.hpp"
#include "oppmdp/envs/robot.hpp"
#include "oppmdp/kernels/kernels.hpp"

namespace oppmdp::experiment {

namespace {

template <class T>
void read_key(const nlohmann::json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

void apply_kernels(const std::string& name) {
  if (name == "auto") return;
  try {
    kernels::select_backend(kernels::parse_backend(name));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

template <OpportunisticModel M>
RunOutcome run_model(const M& model, const ExperimentConfig& c, StateIndex initial) {
  LearnerConfig lc;
  lc.v = c.v;
  lc.alpha = c.alpha;
  lc.horizon = c.horizon;
  if (c.redirect) lc.redirect = c.redirect_params;
  Learner<M> learner(model, lc, initial);
  RngStreams rng(c.seed);
  const std::uint64_t every =
      c.checkpoint_every != 0 ? c.checkpoint_every : std::max<std::uint64_t>(1, c.horizon / 100);
  RunMetrics metrics(model.num_states(), model.num_constraints(), every);
  for (std::uint64_t t = 0; t < c.horizon; ++t) {
    const auto& rec = learner.step(rng);
    metrics.record(rec, learner.belief().probabilities(), learner.queues());
  }
  RunOutcome out;
  out.report = metrics.finalize();
  const auto next = learner.peek_next();
  out.balance = metrics.balance_check(next.queues, next.shift);
  out.checkpoints = metrics.checkpoints();
  out.num_constraints = model.num_constraints();
  out.redirect_activations = learner.redirect_state().activations;
  return out;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (env != "robot" && env != "synthetic")
    throw ConfigError("env must be 'robot' or 'synthetic', got '" + env + "'");
  if (env == "synthetic" && instance.empty())
    throw ConfigError("env=synthetic needs --instance");
  if (!(u >= 0.0) || !std::isfinite(u)) throw ConfigError("u must be a nonnegative number");
  LearnerConfig lc;
  lc.v = v;
  lc.alpha = alpha;
  lc.horizon = horizon;
  if (redirect) lc.redirect = redirect_params;
  lc.validate();
  if (power_constraint && !(power_budget > 0.0 && std::isfinite(power_budget)))
    throw ConfigError("power budget must be positive");
  if (seeds_per_point == 0) throw ConfigError("seeds per point must be at least 1");
  if (workers == 0) throw ConfigError("workers must be at least 1");
  if (kernels != "auto" && kernels != "scalar" && kernels != "avx2")
    throw ConfigError("kernels must be auto, scalar or avx2");
}

nlohmann::json ExperimentConfig::to_json() const {
  return {{"env", env},
          {"instance", instance},
          {"u", u},
          {"V", v},
          {"alpha", alpha},
          {"T", horizon},
          {"seed", seed},
          {"redirect", redirect},
          {"gamma", redirect_params.gamma},
          {"theta_high", redirect_params.theta_high},
          {"theta_low", redirect_params.theta_low},
          {"power_constraint", power_constraint},
          {"power_budget", power_budget},
          {"out", out_dir},
          {"seeds", seeds_per_point},
          {"workers", workers},
          {"checkpoint_every", checkpoint_every},
          {"kernels", kernels}};
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j, ExperimentConfig c) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  const nlohmann::json& src = j.contains("config") ? j.at("config") : j;
  read_key(src, "env", c.env);
  read_key(src, "instance", c.instance);
  read_key(src, "u", c.u);
  read_key(src, "V", c.v);
  read_key(src, "alpha", c.alpha);
  read_key(src, "T", c.horizon);
  read_key(src, "seed", c.seed);
  if (src.contains("redirect") && src.at("redirect").is_string()) {
    const auto s = src.at("redirect").get<std::string>();
    if (s != "on" && s != "off") throw ConfigError("redirect must be on or off");
    c.redirect = s == "on";
  } else {
    read_key(src, "redirect", c.redirect);
  }
  read_key(src, "gamma", c.redirect_params.gamma);
  read_key(src, "theta_high", c.redirect_params.theta_high);
  read_key(src, "theta_low", c.redirect_params.theta_low);
  read_key(src, "power_constraint", c.power_constraint);
  read_key(src, "power_budget", c.power_budget);
  read_key(src, "out", c.out_dir);
  read_key(src, "seeds", c.seeds_per_point);
  read_key(src, "workers", c.workers);
  read_key(src, "checkpoint_every", c.checkpoint_every);
  read_key(src, "kernels", c.kernels);
  return c;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  return from_json(j, ExperimentConfig{});
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  return load(path, ExperimentConfig{});
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return from_json(j, std::move(base));
}

RunOutcome run(const ExperimentConfig& c) {
  c.validate();
  apply_kernels(c.kernels);
  if (c.env == "robot") {
    robot::RobotConfig rc;
    rc.u = c.u;
    rc.power_constraint = c.power_constraint;
    rc.power_budget = c.power_budget;
    const robot::RobotEnv env(rc);
    RunOutcome out = run_model(env, c, env.home_state());
    for (StateIndex i = 0; i < env.num_states(); ++i) {
      const auto s = robot::state_at(i);
      out.state_labels.push_back("(" + std::to_string(s.cell) + "," + (s.hold ? "1" : "0") + ")");
    }
    return out;
  }
  const FiniteInstance inst = FiniteInstance::load(c.instance);
  RunOutcome out = run_model(inst, c, inst.initial_state());
  for (StateIndex i = 0; i < inst.num_states(); ++i) out.state_labels.push_back(std::to_string(i));
  return out;
}

std::string version() { return "0.1.0"; }

nlohmann::json manifest(const ExperimentConfig& config, const RunOutcome& o) {
  ExperimentConfig pinned = config;
  pinned.kernels = std::string(kernels::backend_name(kernels::active().backend));
  nlohmann::json j{{"config", pinned.to_json()},
                   {"seed", config.seed},
                   {"version", version()},
                   {"kernel_backend", pinned.kernels},
                   {"slots", o.report.slots},
                   {"r_virtual", o.report.r_virtual},
                   {"r_actual", o.report.r_actual},
                   {"constraint_virtual", o.report.constraint_virtual},
                   {"constraint_actual", o.report.constraint_actual},
                   {"qnorm_over_t", o.report.qnorm_over_t},
                   {"redirect_active_count", o.report.redirect_active_count},
                   {"redirect_activations", o.redirect_activations},
                   {"balance_max_residual", o.balance.max_residual},
                   {"balance_min_slack", o.balance.min_slack}};
  return j;
}

void write_artifacts(const ExperimentConfig& config, const RunOutcome& o,
                     const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream csv(dir / "metrics.csv");
    write_checkpoints_csv(csv, o.checkpoints, o.num_constraints);
    if (!csv) throw std::runtime_error("failed writing " + (dir / "metrics.csv").string());
  }
  {
    std::ofstream occ(dir / "occupancy.json");
    nlohmann::json j{{"virtual", occupancy_json(o.report.virtual_occupancy, o.state_labels)},
                     {"actual", occupancy_json(o.report.actual_occupancy, o.state_labels)}};
    occ << j.dump(2) << '\n';
  }
  {
    std::ofstream man(dir / "manifest.json");
    man << manifest(config, o).dump(2) << '\n';
  }
}

std::uint64_t sweep_seed(std::uint64_t master, double value, unsigned replicate) {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ std::bit_cast<std::uint64_t>(value));
  return splitmix64(h ^ static_cast<std::uint64_t>(replicate));
}

ExperimentConfig with_parameter(ExperimentConfig c, const std::string& parameter, double value) {
  if (parameter == "alpha")
    c.alpha = value;
  else if (parameter == "V")
    c.v = value;
  else if (parameter == "u")
    c.u = value;
  else
    throw ConfigError("sweep parameter must be alpha, V or u, got '" + parameter + "'");
  return c;
}

std::vector<SweepRow> sweep(const ExperimentConfig& base, const std::string& parameter,
                            const std::vector<double>& values) {
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  base.validate();
  struct Job {
    ExperimentConfig config;
    double r_virtual = 0.0;
    double r_actual = 0.0;
  };
  std::vector<Job> jobs;
  for (double value : values) {
    for (unsigned r = 0; r < base.seeds_per_point; ++r) {
      ExperimentConfig c = with_parameter(base, parameter, value);
      c.seed = sweep_seed(base.seed, value, r);
      c.validate();
      jobs.push_back({std::move(c)});
    }
  }
  apply_kernels(base.kernels);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        ExperimentConfig c = jobs[i].config;
        c.kernels = "auto";  // already applied; avoid concurrent reselection
        const RunOutcome o = run(c);
        jobs[i].r_virtual = o.report.r_virtual;
        jobs[i].r_actual = o.report.r_actual;
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned threads = std::min<std::size_t>(base.workers, jobs.size());
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < threads; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  std::vector<SweepRow> rows;
  const std::size_t m = base.seeds_per_point;
  for (std::size_t p = 0; p < values.size(); ++p) {
    for (const char* system : {"virtual", "actual"}) {
      SweepRow row;
      row.value = values[p];
      row.system = system;
      for (std::size_t r = 0; r < m; ++r) {
        const Job& j = jobs[p * m + r];
        row.samples.push_back(row.system == "virtual" ? j.r_virtual : j.r_actual);
      }
      double mean = 0.0;
      for (double x : row.samples) mean += x;
      mean /= static_cast<double>(m);
      double var = 0.0;
      for (double x : row.samples) var += (x - mean) * (x - mean);
      row.mean = mean;
      row.stderr_ = m > 1 ? std::sqrt(var / static_cast<double>(m - 1) / static_cast<double>(m)) : 0.0;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "value,system,mean,stderr\n" << std::setprecision(17);
  for (const SweepRow& r : rows) out << r.value << ',' << r.system << ',' << r.mean << ',' << r.stderr_ << '\n';
}

}  // namespace oppmdp::experiment
