#include <algorithm>
#include <cmath>
#include <vector>

#include "../support/properties.hpp"
#include "doctest.h"
#include "oppmdp/core/model.hpp"
#include "oppmdp/envs/grid.hpp"
#include "oppmdp/envs/robot.hpp"
#include "oppmdp/envs/synthetic.hpp"

using namespace oppmdp;
using namespace oppmdp::robot;

TEST_CASE("wall set certification") {
  const auto o = props::wall_certification();
  INFO(o.detail);
  CHECK(o.ok);
  const Grid g(Grid::default_walls());
  CHECK(g.connected());
  CHECK(g.count_shortest_paths(1, 9) >= 2);
  CHECK(g.neighbors(9) == std::vector<Cell>{8});
  CHECK(g.shortest_path(1, 16) == std::vector<Cell>{1, 6, 11, 16});
  CHECK_THROWS_AS(Grid({{1, 7}}), ConfigError);
}

TEST_CASE("robot action menus") {
  const RobotEnv env;
  Rewards w{};
  w[11] = 0.4;
  const auto menu = env.action_menu({12, false}, w);
  CHECK(menu.size() == 8);
  std::vector<Cell> reach;
  for (ActionId a : menu) reach.push_back(env.next_state({12, false}, decode(a)).cell);
  std::sort(reach.begin(), reach.end());
  reach.erase(std::unique(reach.begin(), reach.end()), reach.end());
  CHECK(reach == std::vector<Cell>{7, 11, 12, 17});
  CHECK(decode(menu.front()).collect);

  for (ActionId a : env.action_menu({12, true}, w)) CHECK_FALSE(decode(a).collect);
  for (ActionId a : env.action_menu({1, false}, Rewards{})) CHECK_FALSE(decode(a).collect);
  w[11] = 0.0;
  CHECK(env.action_menu({12, false}, w).size() == 4);
}

TEST_CASE("robot transitions") {
  const RobotEnv env;
  CHECK(state_index(env.next_state({12, false}, {true, Move::north})) == state_index({7, true}));
  CHECK(state_index(env.next_state({6, true}, {false, Move::north})) == state_index({1, false}));
  CHECK(state_index(env.next_state({20, false}, {false, Move::stay})) == state_index({20, false}));
  CHECK(state_index(env.next_state({6, false}, {true, Move::north})) == state_index({1, false}));
  CHECK_THROWS_AS(env.next_state({12, false}, {false, Move::east}), ModelError);
  CHECK_THROWS_AS(env.next_state({12, true}, {true, Move::stay}), ModelError);
  for (StateIndex i = 0; i < env.num_states(); ++i) CHECK(state_index(state_at(i)) == i);
}

TEST_CASE("robot costs") {
  RobotConfig rc;
  rc.power_constraint = true;
  const RobotEnv env(rc);
  Rewards w{};
  w[8] = 17.3;
  const StateIndex s9 = state_index({9, false});
  CHECK(env.cost(s9, 0, w, encode({true, Move::west})) == doctest::Approx(-17.3));
  CHECK(env.cost(state_index({9, true}), 1, w, encode({false, Move::west})) == doctest::Approx(1.1));
  CHECK(env.cost(s9, 1, w, encode({false, Move::stay})) == doctest::Approx(-0.9));
  CHECK(env.cost(s9, 1, w, encode({false, Move::west})) == doctest::Approx(0.1));
  CHECK(env.cost_bound() == 20.0);
  RandomStream rng(3);
  validate_model(env, rng, 200);
}

TEST_CASE("reward statistics") {
  RandomStream rng(17);
  constexpr int kDraws = 1'000'000;
  double mean9 = 0.0;
  int above = 0;
  for (int t = 0; t < kDraws; ++t) {
    const Rewards w = sample_rewards(4.0, rng);
    REQUIRE(w[0] == 0.0);
    mean9 += w[8];
    if (w[15] > 1.6808) ++above;
  }
  CHECK(mean9 / kDraws == doctest::Approx(5.0).epsilon(0.01));
  CHECK(static_cast<double>(above) / kDraws == doctest::Approx((4.0 - 1.6808) / 8.0).epsilon(0.03));
}

TEST_CASE("escort reaches home along shortest paths") {
  const RobotEnv env;
  for (StateIndex i = 1; i < env.num_states(); ++i) {
    RobotState s = state_at(i);
    int steps = 0;
    while (s.cell != kHomeCell && steps < 50) {
      const RobotAction a = decode(env.escort_action(state_index(s)));
      CHECK_FALSE(a.collect);
      s = env.next_state(s, a);
      ++steps;
    }
    CHECK(steps == env.grid().distance(state_at(i).cell, kHomeCell));
  }
}

TEST_CASE("robot config JSON") {
  RobotConfig rc;
  rc.u = 7.0;
  rc.power_constraint = true;
  const RobotConfig back = RobotConfig::from_json(rc.to_json());
  CHECK(back.u == 7.0);
  CHECK(back.power_constraint);
  CHECK(back.walls.size() == rc.walls.size());
}

TEST_CASE("synthetic instances satisfy the model contract") {
  RandomStream rng(1);
  validate_model(synthetic::toggle(), rng, 20);
  validate_model(synthetic::ladder(), rng, 20);
  validate_model(synthetic::gamble(), rng, 20);
  validate_model(synthetic::constant_cost(0.3), rng, 20);
  synthetic::RandomInstanceOptions opts;
  opts.k = 2;
  for (std::uint64_t s = 0; s < 50; ++s) validate_model(synthetic::random_instance(s, opts), rng, 5);
}
