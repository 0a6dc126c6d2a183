#pragma once

// Distribution-aware renewal heuristics for the robot world.
//
//   H1: go 1 -> 16, wait there for W_16 > theta, collect and return.
//   H2: go 1 -> 9 (10 steps), wait for W_9 > theta, collect and return.
//   H3: go 1 -> 16, look once; collect if W_16 > theta1, otherwise continue
//       16 -> 9 and wait for W_9 > theta2.
//
// heuristic_value optimizes the closed-form renewal-reward ratios by grid
// search; heuristic_simulate runs the frame policies on the robot model.

#include <cstdint>
#include <optional>
#include <vector>

#include "json.hpp"
#include "oppmdp/core/rng.hpp"
#include "oppmdp/envs/robot.hpp"

namespace oppmdp::baselines {

struct HeuristicConfig {
  int which = 2;
  double u = 4.0;
  /// Grid step as a fraction of each threshold's range.
  double resolution = 1e-4;
  /// Average power budget (H2 only).
  std::optional<double> power_budget;

  void validate() const;
};

struct HeuristicValue {
  std::vector<double> thresholds;
  double reward = 0.0;
  std::optional<double> power;

  nlohmann::json to_json() const;
};

double heuristic1_reward(double u, double theta);
double heuristic2_reward(double theta);
double heuristic2_power(double theta);
double heuristic3_reward(double u, double theta1, double theta2);

HeuristicValue heuristic_value(const HeuristicConfig& config);

/// Best of H1, H2, H3 at this u.
double best_heuristic_reward(double u, double resolution = 1e-4);

struct SimulationResult {
  double reward = 0.0;
  double power = 0.0;
  std::uint64_t slots = 0;
  std::uint64_t collections = 0;
};

/// Executes the frame policy for T slots starting at home. `thresholds` holds
/// one value for H1/H2 and two for H3.
SimulationResult heuristic_simulate(const HeuristicConfig& config,
                                    const std::vector<double>& thresholds,
                                    const robot::RobotEnv& env, RandomStream& rng,
                                    std::uint64_t horizon);

}  // namespace oppmdp::baselines
