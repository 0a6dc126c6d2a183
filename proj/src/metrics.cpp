#include "oppmdp/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <stdexcept>

namespace oppmdp {

RunMetrics::RunMetrics(std::size_t n, std::size_t k, std::uint64_t checkpoint_every)
    : n_(n),
      k_(k),
      checkpoint_every_(checkpoint_every),
      constraint_virtual_(k),
      constraint_actual_(k),
      virtual_visits_(n, 0.0),
      actual_visits_(n, 0),
      balance_sum_(n, 0.0) {}

void RunMetrics::merge(const RunMetrics& other) {
  if (other.n_ != n_ || other.k_ != k_) throw std::invalid_argument("merging incompatible metrics");
  slots_ += other.slots_;
  virtual_objective_.merge(other.virtual_objective_);
  actual_objective_.merge(other.actual_objective_);
  for (std::size_t l = 0; l < k_; ++l) {
    constraint_virtual_[l].merge(other.constraint_virtual_[l]);
    constraint_actual_[l].merge(other.constraint_actual_[l]);
  }
  for (std::size_t i = 0; i < n_; ++i) {
    virtual_visits_[i] += other.virtual_visits_[i];
    actual_visits_[i] += other.actual_visits_[i];
    balance_sum_[i] += other.balance_sum_[i];
  }
  belief_shift_.merge(other.belief_shift_);
  redirect_active_count_ += other.redirect_active_count_;
}

MetricsReport RunMetrics::finalize() const {
  if (slots_ == 0) throw std::logic_error("metrics: empty run (T = 0)");
  const double t = static_cast<double>(slots_);
  MetricsReport r;
  r.slots = slots_;
  r.r_virtual = -virtual_objective_.value() / t;
  r.r_actual = -actual_objective_.value() / t;
  for (std::size_t l = 0; l < k_; ++l) {
    r.constraint_virtual.push_back(constraint_virtual_[l].value() / t);
    r.constraint_actual.push_back(constraint_actual_[l].value() / t);
  }
  r.virtual_occupancy.resize(n_);
  r.actual_occupancy.resize(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    r.virtual_occupancy[i] = virtual_visits_[i] / t;
    r.actual_occupancy[i] = static_cast<double>(actual_visits_[i]) / t;
  }
  r.qnorm = last_qnorm_;
  r.qnorm_over_t = last_qnorm_ / t;
  r.redirect_active_count = redirect_active_count_;
  return r;
}

BalanceCheck RunMetrics::balance_check(const VirtualQueues& next_queues, double next_shift) const {
  if (slots_ == 0) throw std::logic_error("metrics: empty run (T = 0)");
  const double t = static_cast<double>(slots_);
  // The slot-0 shift is pi(0) - pi(-1) = 0, so the recorded shifts plus the
  // peeked one are exactly sum_{t=1}^{T} ||pi(t) - pi(t-1)||_1.
  const double shifts = (belief_shift_.value() + next_shift) / t;
  BalanceCheck check;
  check.min_slack = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n_; ++j) {
    const double residual = std::abs(balance_sum_[j] / t);
    const double bound = std::abs(next_queues.q[j]) / t + shifts;
    check.max_residual = std::max(check.max_residual, residual);
    check.min_slack = std::min(check.min_slack, bound - residual);
  }
  return check;
}

void RunMetrics::take_checkpoint() {
  const double t = static_cast<double>(slots_);
  Checkpoint c;
  c.t = slots_;
  c.r_virtual = -virtual_objective_.value() / t;
  c.r_actual = -actual_objective_.value() / t;
  for (std::size_t l = 0; l < k_; ++l) {
    c.constraint_virtual.push_back(constraint_virtual_[l].value() / t);
    c.constraint_actual.push_back(constraint_actual_[l].value() / t);
  }
  c.qnorm = last_qnorm_;
  c.redirect_active_count = redirect_active_count_;
  checkpoints_.push_back(std::move(c));
}

void RunMetrics::write_checkpoints_csv(std::ostream& out) const {
  oppmdp::write_checkpoints_csv(out, checkpoints_, k_);
}

void write_checkpoints_csv(std::ostream& out, std::span<const Checkpoint> checkpoints,
                           std::size_t k) {
  out << "t,r_virtual,r_actual";
  for (std::size_t l = 1; l <= k; ++l) out << ",c" << l << "_virtual,c" << l << "_actual";
  out << ",qnorm,redirect_active_count\n";
  out << std::setprecision(17);
  for (const Checkpoint& c : checkpoints) {
    out << c.t << ',' << c.r_virtual << ',' << c.r_actual;
    for (std::size_t l = 0; l < k; ++l)
      out << ',' << c.constraint_virtual[l] << ',' << c.constraint_actual[l];
    out << ',' << c.qnorm << ',' << c.redirect_active_count << '\n';
  }
}

nlohmann::json occupancy_json(std::span<const double> fractions,
                              std::span<const std::string> labels) {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t i = 0; i < fractions.size(); ++i)
    j[labels[i]] = std::round(fractions[i] * 1000.0) / 1000.0;
  return j;
}

}  // namespace oppmdp
