#include "oppmdp/envs/synthetic.hpp"

#include <numeric>

#include "oppmdp/core/rng.hpp"

namespace oppmdp::synthetic {

FiniteInstance toggle() {
  auto stay = [](std::size_t i, double w) {
    std::vector<double> next(2, 0.0);
    next[i] = 1.0;
    return FiniteAction{"stay", {i == 0 ? -w : 0.0}, next};
  };
  auto go = [](std::size_t i) {
    std::vector<double> next(2, 0.0);
    next[1 - i] = 1.0;
    return FiniteAction{"go", {0.0}, next};
  };
  std::vector<std::vector<std::vector<FiniteAction>>> menus(2);
  for (std::size_t i = 0; i < 2; ++i)
    for (double w : {0.0, 1.0}) menus[i].push_back({stay(i, w), go(i)});
  return FiniteInstance(2, 0, 1.0, {0.5, 0.5}, std::move(menus));
}

FiniteInstance single_state(std::vector<double> w_probabilities,
                            std::vector<std::vector<double>> costs) {
  double c_max = 1.0;
  std::vector<std::vector<std::vector<FiniteAction>>> menus(1);
  for (const auto& per_w : costs) {
    auto& menu = menus[0].emplace_back();
    for (double c : per_w) {
      c_max = std::max(c_max, std::abs(c));
      menu.push_back({"a" + std::to_string(menu.size()), {c}, {1.0}});
    }
  }
  return FiniteInstance(1, 0, c_max, std::move(w_probabilities), std::move(menus));
}

FiniteInstance constant_cost(double c) {
  const std::vector<std::vector<double>> rows{{0.2, 0.5, 0.3}, {0.0, 0.0, 1.0}, {0.6, 0.4, 0.0}};
  std::vector<std::vector<std::vector<FiniteAction>>> menus(3);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t w = 0; w < 2; ++w) {
      auto& menu = menus[i].emplace_back();
      for (std::size_t a = 0; a < 2; ++a)
        menu.push_back({"a" + std::to_string(a), {c}, rows[(i + w + a) % 3]});
    }
  }
  return FiniteInstance(3, 0, std::max(1.0, std::abs(c)), {0.5, 0.5}, std::move(menus));
}

FiniteInstance ladder() {
  // W in {0, 1, 2}. State 0 is the base, state 2 the reward site. Climbing
  // is unreliable; at state 2 the controller may harvest (reward w) and drop
  // back to 0, or wait for a better draw at a small holding cost.
  const std::vector<double> q{0.5, 0.3, 0.2};
  std::vector<std::vector<std::vector<FiniteAction>>> menus(3);
  for (std::size_t w = 0; w < 3; ++w) {
    const double value = static_cast<double>(w);
    menus[0].push_back({{"rest", {0.0}, {1.0, 0.0, 0.0}}, {"climb", {0.1}, {0.3, 0.7, 0.0}}});
    menus[1].push_back({{"down", {0.0}, {1.0, 0.0, 0.0}}, {"climb", {0.1}, {0.0, 0.4, 0.6}}});
    menus[2].push_back({{"harvest", {-value}, {1.0, 0.0, 0.0}},
                        {"wait", {0.05}, {0.0, 0.0, 1.0}},
                        {"slip", {-0.5 * value}, {0.0, 1.0, 0.0}}});
  }
  return FiniteInstance(3, 0, 2.0, q, std::move(menus));
}

FiniteInstance gamble() {
  // W in {0, 1}. States 0 and 1 pay small rewards; state 2 pays the most but
  // can only be reached by a coin-flip transition from state 1.
  const std::vector<double> q{0.4, 0.6};
  std::vector<std::vector<std::vector<FiniteAction>>> menus(3);
  for (std::size_t w = 0; w < 2; ++w) {
    const double bonus = w == 1 ? 0.3 : 0.0;
    menus[0].push_back({{"idle", {-0.2 - bonus}, {1.0, 0.0, 0.0}},
                        {"advance", {0.0}, {0.0, 1.0, 0.0}}});
    menus[1].push_back({{"idle", {-0.1}, {0.0, 1.0, 0.0}},
                        {"gamble", {0.2}, {0.5, 0.0, 0.5}},
                        {"retreat", {0.0}, {1.0, 0.0, 0.0}}});
    menus[2].push_back({{"cash", {-1.0 * (1.0 + bonus)}, {0.0, 0.2, 0.8}},
                        {"hold", {-0.4}, {0.0, 0.0, 1.0}}});
  }
  return FiniteInstance(3, 0, 1.5, q, std::move(menus));
}

FiniteInstance random_instance(std::uint64_t seed, const RandomInstanceOptions& o) {
  RandomStream rng(splitmix64(seed));
  std::vector<double> q(o.support);
  for (double& v : q) v = 0.1 + rng.uniform();
  const double total = std::accumulate(q.begin(), q.end(), 0.0);
  for (double& v : q) v /= total;

  std::vector<std::vector<std::vector<FiniteAction>>> menus(o.n);
  for (std::size_t i = 0; i < o.n; ++i) {
    for (std::size_t w = 0; w < o.support; ++w) {
      auto& menu = menus[i].emplace_back();
      const std::size_t count = 1 + rng.bits() % o.max_actions;
      for (std::size_t a = 0; a < count; ++a) {
        FiniteAction act;
        act.label = "a" + std::to_string(a);
        for (std::size_t l = 0; l <= o.k; ++l) act.costs.push_back(rng.uniform(-o.c_max, o.c_max));
        act.next.assign(o.n, 0.0);
        if (rng.uniform() < o.deterministic_fraction) {
          act.next[rng.bits() % o.n] = 1.0;
        } else {
          double row_total = 0.0;
          for (double& p : act.next) {
            p = rng.uniform() < 0.3 ? 0.0 : rng.uniform();
            row_total += p;
          }
          if (row_total == 0.0) {
            act.next[rng.bits() % o.n] = 1.0;
          } else {
            // Normalize, then push the rounding residue onto the largest entry.
            for (double& p : act.next) p /= row_total;
            auto biggest = std::max_element(act.next.begin(), act.next.end());
            *biggest += 1.0 - std::accumulate(act.next.begin(), act.next.end(), 0.0);
          }
        }
        menu.push_back(std::move(act));
      }
    }
  }
  return FiniteInstance(o.n, o.k, o.c_max, std::move(q), std::move(menus));
}

}  // namespace oppmdp::synthetic
