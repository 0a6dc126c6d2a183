#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "oppmdp/core/rng.hpp"
#include "oppmdp/core/types.hpp"

namespace oppmdp {

/// One menu entry of a finite instance: costs c_{i,0..k}(w, a) and the dense
/// transition row p_{i,.}(w, a).
struct FiniteAction {
  std::string label;
  std::vector<double> costs;
  std::vector<double> next;
};

/// An opportunistic MDP with finite side-information support and explicit
/// tables. Side information is the index of the realized support point.
///
/// JSON layout:
///   { "n": 2, "k": 0, "c_max": 1.0, "initial_state": 0,
///     "w_probabilities": [0.5, 0.5],
///     "menus": [ [ [ {"label": "stay", "costs": [0.0], "next": [1, 0]}, ... ],  // state 0, w 0
///                  [ ... ] ],                                                    // state 0, w 1
///                [ ... ] ] }                                                     // state 1
class FiniteInstance {
 public:
  using SideInfo = std::size_t;

  /// Validates every table; throws ConfigError on a malformed instance.
  FiniteInstance(std::size_t n, std::size_t k, double c_max, std::vector<double> w_probabilities,
                 std::vector<std::vector<std::vector<FiniteAction>>> menus,
                 StateIndex initial_state = 0);

  static FiniteInstance from_json(const nlohmann::json& j);
  static FiniteInstance load(const std::filesystem::path& path);
  nlohmann::json to_json() const;

  std::size_t num_states() const noexcept { return n_; }
  std::size_t num_constraints() const noexcept { return k_; }
  double cost_bound() const noexcept { return c_max_; }
  std::size_t support_size() const noexcept { return w_probabilities_.size(); }
  std::span<const double> w_probabilities() const noexcept { return w_probabilities_; }
  StateIndex initial_state() const noexcept { return initial_state_; }

  std::span<const FiniteAction> menu(StateIndex i, SideInfo w) const { return menus_[i][w]; }

  void actions(StateIndex i, SideInfo w, std::vector<ActionId>& out) const;
  double cost(StateIndex i, std::size_t l, SideInfo w, ActionId a) const {
    return menus_[i][w][a].costs[l];
  }
  void transitions(StateIndex i, SideInfo w, ActionId a, std::vector<Transition>& out) const;
  SideInfo sample_side_info(RandomStream& rng) const;

 private:
  std::size_t n_;
  std::size_t k_;
  double c_max_;
  std::vector<double> w_probabilities_;
  std::vector<std::vector<std::vector<FiniteAction>>> menus_;
  std::vector<std::vector<std::vector<std::vector<Transition>>>> sparse_;
  StateIndex initial_state_;
};

}  // namespace oppmdp
