#pragma once

// Value-function stochastic approximation baseline.
//
// Each slot, after observing w, every state i takes
//   J~(i) = max_a  -c_{i,0}(w,a) + rho sum_j p_ij(w,a) J(j)
// and J <- (1 - eta) J + eta J~. The actual system plays the maximizer at its
// own state.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "oppmdp/core/compensated_sum.hpp"
#include "oppmdp/core/model.hpp"
#include "oppmdp/core/rng.hpp"
#include "oppmdp/core/simplex.hpp"
#include "oppmdp/core/types.hpp"

namespace oppmdp::baselines {

struct JBaselineState {
  JBaselineState() = default;
  explicit JBaselineState(std::size_t n, double rho_ = 0.999, double eta_ = 0.001)
      : j(n, 0.0), rho(rho_), eta(eta_) {}

  std::vector<double> j;
  double rho = 0.999;
  double eta = 0.001;

  void validate() const;
};

/// One update. `actions` receives the maximizing action of every state
/// (lowest menu index on ties). J is updated in place.
template <OpportunisticModel M>
void j_step(JBaselineState& state, const typename M::SideInfo& w, const M& model,
            std::vector<ActionId>& actions) {
  const std::size_t n = model.num_states();
  actions.resize(n);
  thread_local std::vector<ActionId> menu;
  thread_local std::vector<Transition> row;
  thread_local std::vector<double> target;
  target.resize(n);
  for (StateIndex i = 0; i < n; ++i) {
    model.actions(i, w, menu);
    if (menu.empty()) throw ModelError("empty action menu at state " + std::to_string(i));
    double best = 0.0;
    for (std::size_t m = 0; m < menu.size(); ++m) {
      model.transitions(i, w, menu[m], row);
      double future = 0.0;
      for (const Transition& t : row) future += t.probability * state.j[t.next];
      const double value = -model.cost(i, 0, w, menu[m]) + state.rho * future;
      if (m == 0 || value > best) {
        best = value;
        actions[i] = menu[m];
      }
    }
    target[i] = best;
  }
  for (StateIndex i = 0; i < n; ++i) state.j[i] = (1.0 - state.eta) * state.j[i] + state.eta * target[i];
}

struct JRunResult {
  double reward = 0.0;  // -(1/T) sum c_{S(t),0}
  std::vector<double> constraints;
  std::vector<double> occupancy;
  double max_abs_j = 0.0;
};

/// Runs the baseline on the actual system for `horizon` slots. Uses the W and
/// V streams of `rng` the same way the learner does.
template <OpportunisticModel M>
JRunResult run_j_baseline(const M& model, JBaselineState state, StateIndex initial_state,
                          std::uint64_t horizon, RngStreams& rng) {
  state.validate();
  const std::size_t n = model.num_states();
  const std::size_t k = model.num_constraints();
  if (state.j.size() != n) throw ConfigError("J baseline: J has the wrong length");
  if (initial_state >= n) throw ConfigError("initial state out of range");
  if (horizon == 0) throw ConfigError("J baseline: horizon must be positive");
  std::vector<ActionId> actions;
  std::vector<Transition> row;
  CompensatedSum reward;
  std::vector<CompensatedSum> constraint(k);
  std::vector<std::uint64_t> visits(n, 0);
  JRunResult out;
  StateIndex s = initial_state;
  for (std::uint64_t t = 0; t < horizon; ++t) {
    const auto w = model.sample_side_info(rng.w);
    (void)rng.u.uniform();
    j_step(state, w, model, actions);
    const ActionId a = actions[s];
    reward.add(-model.cost(s, 0, w, a));
    for (std::size_t l = 0; l < k; ++l) constraint[l].add(model.cost(s, l + 1, w, a));
    ++visits[s];
    model.transitions(s, w, a, row);
    s = sample_state(std::span<const Transition>(row), rng.v.uniform());
    for (double x : state.j) out.max_abs_j = std::max(out.max_abs_j, std::abs(x));
  }
  const double total = static_cast<double>(horizon);
  out.reward = reward.value() / total;
  for (std::size_t l = 0; l < k; ++l) out.constraints.push_back(constraint[l].value() / total);
  for (auto c : visits) out.occupancy.push_back(static_cast<double>(c) / total);
  return out;
}

}  // namespace oppmdp::baselines
