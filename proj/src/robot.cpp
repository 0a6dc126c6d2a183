#include "oppmdp/envs/robot.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace oppmdp::robot {

void RobotConfig::validate() const {
  if (!(u >= 0.0) || !std::isfinite(u)) throw ConfigError("robot: u must be nonnegative");
  if (!std::isfinite(power_budget)) throw ConfigError("robot: power budget must be finite");
}

RobotConfig RobotConfig::from_json(const nlohmann::json& j) {
  RobotConfig c;
  try {
    c.u = j.value("u", c.u);
    c.power_constraint = j.value("power_constraint", c.power_constraint);
    c.power_budget = j.value("power_budget", c.power_budget);
    if (j.contains("walls")) {
      c.walls.clear();
      for (const auto& w : j.at("walls")) c.walls.push_back({w.at(0).get<Cell>(), w.at(1).get<Cell>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("robot config: ") + e.what());
  }
  c.validate();
  return c;
}

nlohmann::json RobotConfig::to_json() const {
  nlohmann::json walls_json = nlohmann::json::array();
  for (const Wall& w : walls) walls_json.push_back({w.a, w.b});
  return {{"u", u}, {"power_constraint", power_constraint}, {"power_budget", power_budget},
          {"walls", walls_json}};
}

Rewards sample_rewards(double u, RandomStream& rng) {
  Rewards w{};
  for (Cell c = 2; c <= kCells; ++c) {
    if (!rng.bernoulli(0.5)) continue;
    const double top = c == 9 ? 20.0 : (c == 16 ? u : 1.0);
    w[c - 1] = rng.uniform(0.0, top);
  }
  return w;
}

RobotEnv::RobotEnv(RobotConfig config)
    : config_(std::move(config)), grid_(config_.walls), c_max_(std::max(20.0, config_.u)) {
  config_.validate();
  if (!grid_.connected()) throw ConfigError("robot: wall set disconnects the grid");
  for (Cell c = 1; c <= kCells; ++c)
    for (Move m : kMoves) dest_[c - 1][static_cast<int>(m)] = grid_.destination(c, m);
  for (StateIndex i = 0; i < kNumStates; ++i)
    escort_[i] = encode({false, grid_.step_toward(state_at(i).cell, kHomeCell)});
}

void RobotEnv::actions(StateIndex i, const Rewards& w, std::vector<ActionId>& out) const {
  const RobotState s = state_at(i);
  out.clear();
  const auto& dest = dest_[s.cell - 1];
  if (!s.hold && w[s.cell - 1] > 0.0) {
    for (Move m : kMoves)
      if (dest[static_cast<int>(m)]) out.push_back(encode({true, m}));
  }
  for (Move m : kMoves)
    if (dest[static_cast<int>(m)]) out.push_back(encode({false, m}));
}

std::vector<ActionId> RobotEnv::action_menu(RobotState s, const Rewards& w) const {
  std::vector<ActionId> out;
  actions(state_index(s), w, out);
  return out;
}

double RobotEnv::power(RobotState s, RobotAction a) noexcept {
  if (a.move == Move::stay) return 0.0;
  return (s.hold || a.collect) ? 2.0 : 1.0;
}

double RobotEnv::cost(StateIndex i, std::size_t l, const Rewards& w, ActionId a) const {
  const RobotState s = state_at(i);
  const RobotAction act = decode(a);
  if (l == 0) return act.collect ? -w[s.cell - 1] : 0.0;
  return power(s, act) - config_.power_budget;
}

RobotState RobotEnv::next_state(RobotState s, RobotAction a) const {
  if (a.collect && s.hold)
    throw ModelError("robot: Collect while holding at cell " + std::to_string(s.cell));
  const auto& to = dest_[s.cell - 1][static_cast<int>(a.move)];
  if (!to)
    throw ModelError("robot: move " + std::string(move_name(a.move)) + " blocked at cell " +
                     std::to_string(s.cell));
  const bool hold = (s.hold || a.collect) && *to != kHomeCell;
  return {*to, hold};
}

void RobotEnv::transitions(StateIndex i, const Rewards&, ActionId a,
                           std::vector<Transition>& out) const {
  out.clear();
  out.push_back({next_state(i, a), 1.0});
}

}  // namespace oppmdp::robot
