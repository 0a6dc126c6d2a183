#pragma once

#include <cstdint>

#include "oppmdp/core/finite_instance.hpp"

namespace oppmdp::synthetic {

/// Two states, W in {0, 1} equiprobable. Action 0 ("stay") keeps the state,
/// action 1 ("go") toggles it. Staying in state 0 costs -w; everything else
/// costs 0.
FiniteInstance toggle();

/// One state; per-support-point menus of action costs (k = 0).
FiniteInstance single_state(std::vector<double> w_probabilities,
                            std::vector<std::vector<double>> costs);

/// Every cost equals `c` (k = 0); transitions are a fixed random-looking mix.
FiniteInstance constant_cost(double c);

/// Three-state instance with stochastic transitions and a reward that is only
/// worth chasing under favourable side information.
FiniteInstance ladder();

/// Three-state instance whose cheapest state can only be entered by
/// gambling on a lossy transition.
FiniteInstance gamble();

struct RandomInstanceOptions {
  std::size_t n = 3;
  std::size_t k = 0;
  std::size_t support = 2;
  std::size_t max_actions = 3;
  /// Probability that a transition row is deterministic.
  double deterministic_fraction = 0.3;
  double c_max = 1.0;
};

FiniteInstance random_instance(std::uint64_t seed, const RandomInstanceOptions& options = {});

}  // namespace oppmdp::synthetic
