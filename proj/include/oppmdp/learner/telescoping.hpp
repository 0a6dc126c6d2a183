#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "oppmdp/core/compensated_sum.hpp"
#include "oppmdp/core/model.hpp"
#include "oppmdp/learner/learner.hpp"

namespace oppmdp {

/// Keeps (pi(t), W(t), A(t)) for every slot so queue identities can be
/// re-derived from the model without trusting the learner's matrices.
template <class SideInfo>
struct Trajectory {
  std::vector<std::vector<double>> beliefs;
  std::vector<SideInfo> side_info;
  std::vector<std::vector<ActionId>> actions;

  void record(const SlotRecord<SideInfo>& rec, std::span<const double> pi) {
    beliefs.emplace_back(pi.begin(), pi.end());
    side_info.push_back(rec.w);
    actions.push_back(rec.actions);
  }
  std::size_t size() const noexcept { return beliefs.size(); }
};

/// Max over j of |Q_j - sum_{t=1}^{T-1} pi(t)^T Y(t-1) y_j| where Q is the
/// learner's queue after the T recorded slots. Y(t-1) is rebuilt from the
/// model and the recorded (W, A); sums are compensated and scalar.
template <OpportunisticModel M>
double telescoping_check(const M& model, const Trajectory<typename M::SideInfo>& traj,
                         std::span<const double> final_q) {
  const std::size_t n = model.num_states();
  std::vector<CompensatedSum> sums(n);
  std::vector<Transition> row;
  std::vector<double> y(n * n);
  for (std::size_t t = 1; t < traj.size(); ++t) {
    std::fill(y.begin(), y.end(), 0.0);
    for (StateIndex i = 0; i < n; ++i) {
      y[i * n + i] = 1.0;
      model.transitions(i, traj.side_info[t - 1], traj.actions[t - 1][i], row);
      for (const Transition& tr : row) y[i * n + tr.next] -= tr.probability;
    }
    const auto& pi = traj.beliefs[t];
    for (StateIndex j = 0; j < n; ++j) {
      double s = 0.0;
      for (StateIndex i = 0; i < n; ++i) s += pi[i] * y[i * n + j];
      sums[j].add(s);
    }
  }
  double residual = 0.0;
  for (StateIndex j = 0; j < n; ++j)
    residual = std::max(residual, std::abs(final_q[j] - sums[j].value()));
  return residual;
}

}  // namespace oppmdp
