#pragma once

// Run and sweep plumbing shared by the command-line tool and the tests.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "oppmdp/learner/learner.hpp"
#include "oppmdp/metrics/metrics.hpp"

namespace oppmdp::experiment {

struct ExperimentConfig {
  std::string env = "robot";  // robot | synthetic
  std::string instance;       // JSON instance path for env=synthetic
  double u = 4.0;
  double v = 5.0;
  double alpha = 1000.0;
  std::uint64_t horizon = 1'000'000;
  std::uint64_t seed = 1;
  bool redirect = true;
  RedirectConfig redirect_params;
  bool power_constraint = false;
  double power_budget = 0.9;
  std::string out_dir;
  unsigned seeds_per_point = 1;
  unsigned workers = 1;
  std::uint64_t checkpoint_every = 0;  // 0 picks horizon / 100
  std::string kernels = "auto";

  /// Throws ConfigError.
  void validate() const;
  nlohmann::json to_json() const;
  /// Keys absent from `j` keep the value in `base`. Accepts either a bare
  /// config object or a manifest with a "config" member.
  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig from_json(const nlohmann::json& j, ExperimentConfig base);
  static ExperimentConfig load(const std::filesystem::path& path);
  static ExperimentConfig load(const std::filesystem::path& path, ExperimentConfig base);
};

struct RunOutcome {
  MetricsReport report;
  BalanceCheck balance;
  std::vector<Checkpoint> checkpoints;
  std::vector<std::string> state_labels;
  std::size_t num_constraints = 0;
  std::uint64_t redirect_activations = 0;
};

/// Validates, selects the kernel backend and runs one learner trajectory.
/// NumericError propagates with the failing slot.
RunOutcome run(const ExperimentConfig& config);

/// metrics.csv, occupancy.json and manifest.json under `dir`.
void write_artifacts(const ExperimentConfig& config, const RunOutcome& outcome,
                     const std::filesystem::path& dir);

nlohmann::json manifest(const ExperimentConfig& config, const RunOutcome& outcome);

/// Independent stream seed for one sweep point.
std::uint64_t sweep_seed(std::uint64_t master, double value, unsigned replicate);

/// Applies a sweep parameter (alpha, V or u) to a config.
ExperimentConfig with_parameter(ExperimentConfig config, const std::string& parameter,
                                double value);

struct SweepRow {
  double value = 0.0;
  std::string system;  // virtual | actual
  double mean = 0.0;
  double stderr_ = 0.0;
  std::vector<double> samples;
};

/// Runs every (value, replicate) pair on `config.workers` threads and
/// reduces in value order. Throws ConfigError on an empty list or an unknown
/// parameter.
std::vector<SweepRow> sweep(const ExperimentConfig& config, const std::string& parameter,
                            const std::vector<double>& values);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

std::string version();

}  // namespace oppmdp::experiment
