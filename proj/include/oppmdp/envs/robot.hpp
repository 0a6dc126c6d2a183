#pragma once

// The 20-cell robot grid world.
//
// Basic state (cell, hold) with index hold * 20 + (cell - 1), so index 0 is
// the home state (1, 0). Side information is the vector of object values
// W_1..W_20 (zero where no object is present). Action ids encode
// (collect, move) as (collect ? 0 : 5) + move, which makes the menu order
// Collect{Stay,N,S,E,W} followed by NoCollect{Stay,N,S,E,W}.

#include <array>
#include <optional>
#include <vector>

#include "json.hpp"
#include "oppmdp/core/rng.hpp"
#include "oppmdp/core/types.hpp"
#include "oppmdp/envs/grid.hpp"

namespace oppmdp::robot {

inline constexpr std::size_t kNumStates = 2 * kCells;

struct RobotConfig {
  double u = 4.0;
  bool power_constraint = false;
  double power_budget = 0.9;
  std::vector<Wall> walls = Grid::default_walls();

  void validate() const;
  static RobotConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct RobotState {
  Cell cell;
  bool hold;
};

struct RobotAction {
  bool collect;
  Move move;
};

constexpr ActionId encode(RobotAction a) noexcept {
  return static_cast<ActionId>((a.collect ? 0 : 5) + static_cast<int>(a.move));
}
constexpr RobotAction decode(ActionId id) noexcept {
  return {id < 5, static_cast<Move>(id % 5)};
}
constexpr StateIndex state_index(RobotState s) noexcept {
  return static_cast<StateIndex>((s.hold ? kCells : 0) + (s.cell - 1));
}
constexpr RobotState state_at(StateIndex i) noexcept {
  return {static_cast<Cell>(i % kCells) + 1, i >= static_cast<StateIndex>(kCells)};
}

using Rewards = std::array<double, kCells>;

/// W_1 = 0; for other cells an object appears with probability 1/2 and has
/// value Unif[0,20] in cell 9, Unif[0,u] in cell 16 and Unif[0,1] elsewhere.
Rewards sample_rewards(double u, RandomStream& rng);

class RobotEnv {
 public:
  using SideInfo = Rewards;

  explicit RobotEnv(RobotConfig config = {});

  const RobotConfig& config() const noexcept { return config_; }
  const Grid& grid() const noexcept { return grid_; }

  std::size_t num_states() const noexcept { return kNumStates; }
  std::size_t num_constraints() const noexcept { return config_.power_constraint ? 1 : 0; }
  double cost_bound() const noexcept { return c_max_; }

  /// Legal actions in the documented order: moves through walls or off the
  /// grid are dropped, and Collect variants are dropped when holding or when
  /// no object is present.
  void actions(StateIndex i, const Rewards& w, std::vector<ActionId>& out) const;
  std::vector<ActionId> action_menu(RobotState s, const Rewards& w) const;

  /// c_0 = -W_cell on Collect; c_1 = power - budget when the power
  /// constraint is on.
  double cost(StateIndex i, std::size_t l, const Rewards& w, ActionId a) const;

  void transitions(StateIndex i, const Rewards& w, ActionId a, std::vector<Transition>& out) const;
  Rewards sample_side_info(RandomStream& rng) const { return sample_rewards(config_.u, rng); }

  /// Deterministic successor; arriving at the home cell deposits the object.
  /// Throws ModelError for a move blocked by a wall or a Collect while holding.
  RobotState next_state(RobotState s, RobotAction a) const;
  StateIndex next_state(StateIndex i, ActionId a) const {
    return state_index(next_state(state_at(i), decode(a)));
  }

  /// 0 to stay, 1 to move empty-handed, 2 to move while holding (including
  /// the slot where the object was just collected).
  static double power(RobotState s, RobotAction a) noexcept;

  StateIndex home_state() const noexcept { return 0; }
  /// NoCollect step along a shortest path to the home cell.
  ActionId escort_action(StateIndex i) const { return escort_[i]; }

 private:
  RobotConfig config_;
  Grid grid_;
  double c_max_;
  std::array<std::array<std::optional<Cell>, 5>, kCells> dest_{};
  std::array<ActionId, kNumStates> escort_{};
};

}  // namespace oppmdp::robot
