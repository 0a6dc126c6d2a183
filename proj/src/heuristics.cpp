#include "oppmdp/baselines/heuristics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

namespace oppmdp::baselines {

void HeuristicConfig::validate() const {
  if (which < 1 || which > 3) throw ConfigError("heuristic: --which must be 1, 2 or 3");
  if (!(u >= 0.0) || !std::isfinite(u)) throw ConfigError("heuristic: u must be nonnegative");
  if (which != 2 && u == 0.0) throw ConfigError("heuristic: H1 and H3 need u > 0");
  if (!(resolution > 0.0 && resolution < 1.0))
    throw ConfigError("heuristic: resolution must lie in (0, 1)");
  if (power_budget && which != 2)
    throw ConfigError("heuristic: the power-constrained form exists for H2 only");
}

nlohmann::json HeuristicValue::to_json() const {
  nlohmann::json j{{"thresholds", thresholds}, {"reward", reward}};
  if (power) j["power"] = *power;
  return j;
}

double heuristic1_reward(double u, double theta) {
  return 0.5 * (theta + u) / (5.0 + 2.0 * u / (u - theta));
}

double heuristic2_reward(double theta) {
  return 0.5 * (theta + 20.0) / (19.0 + 40.0 / (20.0 - theta));
}

double heuristic2_power(double theta) {
  return (10.0 + 2.0 * 10.0) / (19.0 + 40.0 / (20.0 - theta));
}

double heuristic3_reward(double u, double theta1, double theta2) {
  const double short_frame = 0.5 * (u - theta1) / u;
  const double reward = short_frame * 0.5 * (theta1 + u) + (1.0 - short_frame) * 0.5 * (theta2 + 20.0);
  const double length = short_frame * 6.0 + (1.0 - short_frame) * (19.0 + 40.0 / (20.0 - theta2));
  return reward / length;
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Axis {
  double lo;
  double hi;
  bool include_hi;
};

/// Grid maximization over a box. The first pass uses `coarse` points per
/// axis; each following pass re-grids +-2 cells around the incumbent at a
/// tenth of the step until the step reaches `resolution` * range.
std::vector<double> zoom_maximize(const std::function<double(const std::vector<double>&)>& f,
                                  const std::vector<Axis>& axes, double resolution, int coarse) {
  const std::size_t dims = axes.size();
  std::vector<double> step(dims), lo(dims), hi(dims), best(dims);
  for (std::size_t d = 0; d < dims; ++d) {
    step[d] = (axes[d].hi - axes[d].lo) / coarse;
    lo[d] = axes[d].lo;
    hi[d] = axes[d].hi;
  }
  auto admissible = [&](std::size_t d, double x) {
    return x >= axes[d].lo && (axes[d].include_hi ? x <= axes[d].hi : x < axes[d].hi);
  };
  double best_value = kNegInf;
  while (true) {
    std::vector<std::size_t> count(dims);
    for (std::size_t d = 0; d < dims; ++d)
      count[d] = static_cast<std::size_t>(std::llround((hi[d] - lo[d]) / step[d])) + 1;
    std::vector<std::size_t> idx(dims, 0);
    std::vector<double> x(dims);
    while (true) {
      bool ok = true;
      for (std::size_t d = 0; d < dims; ++d) {
        x[d] = lo[d] + static_cast<double>(idx[d]) * step[d];
        ok = ok && admissible(d, x[d]);
      }
      if (ok) {
        const double v = f(x);
        if (v > best_value) {
          best_value = v;
          best = x;
        }
      }
      std::size_t d = 0;
      for (; d < dims; ++d) {
        if (++idx[d] < count[d]) break;
        idx[d] = 0;
      }
      if (d == dims) break;
    }
    bool done = true;
    for (std::size_t d = 0; d < dims; ++d)
      if (step[d] > resolution * (axes[d].hi - axes[d].lo) * (1.0 + 1e-9)) done = false;
    if (done || best_value == kNegInf) break;
    for (std::size_t d = 0; d < dims; ++d) {
      lo[d] = std::max(axes[d].lo, best[d] - 2.0 * step[d]);
      hi[d] = std::min(axes[d].hi, best[d] + 2.0 * step[d]);
      step[d] /= 10.0;
    }
  }
  return best;
}

}  // namespace

HeuristicValue heuristic_value(const HeuristicConfig& c) {
  c.validate();
  HeuristicValue out;
  switch (c.which) {
    case 1: {
      const double u = c.u;
      out.thresholds = zoom_maximize([u](const auto& x) { return heuristic1_reward(u, x[0]); },
                                     {{0.0, u, false}}, c.resolution, 1000);
      out.reward = heuristic1_reward(u, out.thresholds[0]);
      break;
    }
    case 2: {
      const auto budget = c.power_budget;
      out.thresholds = zoom_maximize(
          [budget](const auto& x) {
            if (budget && heuristic2_power(x[0]) > *budget) return kNegInf;
            return heuristic2_reward(x[0]);
          },
          {{0.0, 20.0, false}}, c.resolution, 1000);
      if (out.thresholds.empty()) throw ConfigError("heuristic: power budget is infeasible");
      out.reward = heuristic2_reward(out.thresholds[0]);
      if (budget) out.power = heuristic2_power(out.thresholds[0]);
      break;
    }
    case 3: {
      const double u = c.u;
      out.thresholds = zoom_maximize(
          [u](const auto& x) { return heuristic3_reward(u, x[0], x[1]); },
          {{0.0, u, true}, {0.0, 20.0, false}}, c.resolution, 200);
      out.reward = heuristic3_reward(u, out.thresholds[0], out.thresholds[1]);
      break;
    }
  }
  return out;
}

double best_heuristic_reward(double u, double resolution) {
  double best = kNegInf;
  for (int which : {1, 2, 3}) {
    HeuristicConfig c;
    c.which = which;
    c.u = u;
    c.resolution = resolution;
    best = std::max(best, heuristic_value(c).reward);
  }
  return best;
}

SimulationResult heuristic_simulate(const HeuristicConfig& config,
                                    const std::vector<double>& thresholds,
                                    const robot::RobotEnv& env, RandomStream& rng,
                                    std::uint64_t horizon) {
  using namespace robot;
  config.validate();
  const std::size_t needed = config.which == 3 ? 2 : 1;
  if (thresholds.size() != needed)
    throw ConfigError("heuristic: expected " + std::to_string(needed) + " threshold(s)");
  const Grid& grid = env.grid();
  const Cell site = config.which == 2 ? 9 : 16;

  enum class Phase { outbound, waiting, peek16, to_nine, inbound };
  Phase phase = Phase::outbound;
  RobotState s{kHomeCell, false};
  SimulationResult out;
  double reward = 0.0;
  double power = 0.0;
  for (std::uint64_t t = 0; t < horizon; ++t) {
    const Rewards w = env.sample_side_info(rng);
    RobotAction act{false, Move::stay};
    switch (phase) {
      case Phase::outbound:
        act.move = grid.step_toward(s.cell, site);
        break;
      case Phase::waiting: {
        const double threshold = config.which == 3 ? thresholds[1] : thresholds[0];
        if (w[s.cell - 1] > threshold) act = {true, grid.step_toward(s.cell, kHomeCell)};
        break;
      }
      case Phase::peek16:
        if (w[s.cell - 1] > thresholds[0])
          act = {true, grid.step_toward(s.cell, kHomeCell)};
        else
          act.move = grid.step_toward(s.cell, 9);
        break;
      case Phase::to_nine:
        act.move = grid.step_toward(s.cell, 9);
        break;
      case Phase::inbound:
        act.move = grid.step_toward(s.cell, kHomeCell);
        break;
    }
    const StateIndex i = state_index(s);
    reward -= env.cost(i, 0, w, encode(act));
    power += RobotEnv::power(s, act);
    if (act.collect) ++out.collections;
    s = env.next_state(s, act);

    // Phase bookkeeping on arrival.
    if (act.collect) {
      phase = s.cell == kHomeCell ? Phase::outbound : Phase::inbound;
    } else if (phase == Phase::inbound && s.cell == kHomeCell) {
      phase = Phase::outbound;
    } else if (phase == Phase::outbound && s.cell == site) {
      phase = config.which == 3 ? Phase::peek16 : Phase::waiting;
    } else if (phase == Phase::peek16) {
      phase = s.cell == 9 ? Phase::waiting : Phase::to_nine;
    } else if (phase == Phase::to_nine && s.cell == 9) {
      phase = Phase::waiting;
    }
  }
  const double t = static_cast<double>(horizon);
  out.slots = horizon;
  out.reward = reward / t;
  out.power = power / t;
  return out;
}

}  // namespace oppmdp::baselines
