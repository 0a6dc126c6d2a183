#pragma once

// The opportunistic MDP interface.
//
// A model owns the side-information type W and is the only code that looks
// inside it. Everything the learner needs from W goes through cost(),
// transitions() and actions(). Transition rows are sparse, listed in
// increasing order of the next state, and must sum to one.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "oppmdp/core/rng.hpp"
#include "oppmdp/core/types.hpp"

namespace oppmdp {

template <class M>
concept OpportunisticModel =
    requires(const M& m, const typename M::SideInfo& w, StateIndex i, std::size_t l, ActionId a,
             std::vector<ActionId>& menu, std::vector<Transition>& row, RandomStream& rng) {
      typename M::SideInfo;
      { m.num_states() } -> std::convertible_to<std::size_t>;
      { m.num_constraints() } -> std::convertible_to<std::size_t>;
      { m.cost_bound() } -> std::convertible_to<double>;
      m.actions(i, w, menu);
      { m.cost(i, l, w, a) } -> std::convertible_to<double>;
      m.transitions(i, w, a, row);
      { m.sample_side_info(rng) } -> std::same_as<typename M::SideInfo>;
    };

/// Models that can escort the actual system back to a designated home state.
template <class M>
concept EscortingModel = OpportunisticModel<M> && requires(const M& m, StateIndex i) {
  { m.home_state() } -> std::convertible_to<StateIndex>;
  { m.escort_action(i) } -> std::convertible_to<ActionId>;
};

/// Per-slot matrices G0 (n), Y (n x n, row-major) and G (n x k, row-major)
/// evaluated at the slot's side information and contingency actions.
struct SlotMatrices {
  SlotMatrices() = default;
  SlotMatrices(std::size_t n, std::size_t k) : n(n), k(k), g0(n, 0.0), y(n * n, 0.0), g(n * k, 0.0) {}

  /// The slot -1 values: G0 = -c_max, Y = 0, G = 0.
  static SlotMatrices initial(std::size_t n, std::size_t k, double c_max) {
    SlotMatrices m(n, k);
    for (double& v : m.g0) v = -c_max;
    return m;
  }

  double y_at(StateIndex i, StateIndex j) const { return y[i * n + j]; }
  double g_at(StateIndex i, std::size_t l) const { return g[i * k + l]; }
  std::span<const double> y_row(StateIndex i) const { return {y.data() + i * n, n}; }

  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<double> g0;
  std::vector<double> y;
  std::vector<double> g;
};

/// Fills `out` with the matrices produced by contingency actions `actions`
/// under side information `w`.
template <OpportunisticModel M>
void build_slot_matrices(const M& model, const typename M::SideInfo& w,
                         std::span<const ActionId> actions, std::vector<Transition>& scratch,
                         SlotMatrices& out) {
  const std::size_t n = out.n;
  const std::size_t k = out.k;
  std::fill(out.y.begin(), out.y.end(), 0.0);
  for (StateIndex i = 0; i < n; ++i) {
    const ActionId a = actions[i];
    out.g0[i] = model.cost(i, 0, w, a);
    for (std::size_t l = 0; l < k; ++l) out.g[i * k + l] = model.cost(i, l + 1, w, a);
    double* row = out.y.data() + i * n;
    row[i] = 1.0;
    model.transitions(i, w, a, scratch);
    for (const Transition& tr : scratch) row[tr.next] -= tr.probability;
  }
}

/// Checks the model contract on `samples` side-information draws: nonempty
/// menus, rows summing to one within 1e-12 with entries in [0, 1], and costs
/// bounded by c_max. Throws ModelError describing the first violation.
template <OpportunisticModel M>
void validate_model(const M& model, RandomStream& rng, std::size_t samples) {
  const std::size_t n = model.num_states();
  const std::size_t k = model.num_constraints();
  const double c_max = model.cost_bound();
  if (n == 0) throw ModelError("model has no basic states");
  if (!(c_max > 0.0)) throw ModelError("cost bound must be positive");
  std::vector<ActionId> menu;
  std::vector<Transition> row;
  for (std::size_t s = 0; s < samples; ++s) {
    const auto w = model.sample_side_info(rng);
    for (StateIndex i = 0; i < n; ++i) {
      model.actions(i, w, menu);
      if (menu.empty()) throw ModelError("empty action menu at state " + std::to_string(i));
      for (const ActionId a : menu) {
        for (std::size_t l = 0; l <= k; ++l) {
          const double c = model.cost(i, l, w, a);
          if (!(std::abs(c) <= c_max))
            throw ModelError("cost " + std::to_string(c) + " exceeds c_max at state " +
                             std::to_string(i));
        }
        model.transitions(i, w, a, row);
        double total = 0.0;
        for (const Transition& tr : row) {
          if (tr.next >= n || !(tr.probability >= 0.0 && tr.probability <= 1.0))
            throw ModelError("bad transition entry at state " + std::to_string(i));
          total += tr.probability;
        }
        if (std::abs(total - 1.0) > 1e-12)
          throw ModelError("transition row does not sum to 1 at state " + std::to_string(i));
      }
    }
  }
}

}  // namespace oppmdp
