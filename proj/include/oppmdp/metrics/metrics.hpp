#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "oppmdp/core/compensated_sum.hpp"
#include "oppmdp/kernels/kernels.hpp"
#include "oppmdp/learner/learner.hpp"

namespace oppmdp {

struct Checkpoint {
  std::uint64_t t = 0;
  double r_virtual = 0.0;
  double r_actual = 0.0;
  std::vector<double> constraint_virtual;
  std::vector<double> constraint_actual;
  double qnorm = 0.0;
  std::uint64_t redirect_active_count = 0;
};

struct MetricsReport {
  std::uint64_t slots = 0;
  /// Rewards are negated objective costs.
  double r_virtual = 0.0;
  double r_actual = 0.0;
  std::vector<double> constraint_virtual;
  std::vector<double> constraint_actual;
  std::vector<double> virtual_occupancy;
  std::vector<double> actual_occupancy;
  double qnorm = 0.0;
  double qnorm_over_t = 0.0;
  std::uint64_t redirect_active_count = 0;
};

/// Virtual global-balance diagnostic: per state j,
///   |(1/T) sum_t pi(t)^T Y(t) y_j|  against  |Q_j(T+1)|/T + (1/T) sum ||pi(t)-pi(t-1)||_1.
struct BalanceCheck {
  double max_residual = 0.0;
  double min_slack = 0.0;  // min over j of bound - residual
  bool holds() const noexcept { return min_slack >= -1e-9; }
};

/// Time-average accounting for one run (or several merged runs).
///
/// Scalar sums use compensated summation; per-state vectors are plain sums.
class RunMetrics {
 public:
  RunMetrics(std::size_t n, std::size_t k, std::uint64_t checkpoint_every = 0);

  template <class SideInfo>
  void record(const SlotRecord<SideInfo>& rec, std::span<const double> pi,
              const VirtualQueues& queues) {
    virtual_objective_.add(rec.virtual_objective);
    actual_objective_.add(rec.actual_objective);
    for (std::size_t l = 0; l < k_; ++l) {
      constraint_virtual_[l].add(rec.virtual_constraints[l]);
      constraint_actual_[l].add(rec.actual_constraints[l]);
    }
    kernels::axpy(1.0, pi, virtual_visits_);
    actual_visits_[rec.actual_state] += 1;
    kernels::axpy(1.0, rec.balance, balance_sum_);
    belief_shift_.add(rec.belief_shift);
    if (rec.redirected) ++redirect_active_count_;
    ++slots_;
    last_qnorm_ = queues.norm();
    if (checkpoint_every_ != 0 && slots_ % checkpoint_every_ == 0) take_checkpoint();
  }

  /// Associative, commutative accumulation across runs (checkpoints are not
  /// merged).
  void merge(const RunMetrics& other);

  std::uint64_t slots() const noexcept { return slots_; }
  const std::vector<Checkpoint>& checkpoints() const noexcept { return checkpoints_; }

  /// Throws std::logic_error on an empty run.
  MetricsReport finalize() const;

  /// `next_queues` is Q(T+1) and `next_shift` is ||pi(T) - pi(T-1)||_1, the
  /// quantities one Layer-1 step past the last recorded slot.
  BalanceCheck balance_check(const VirtualQueues& next_queues, double next_shift) const;

  /// CSV with header t,r_virtual,r_actual,c<l>_virtual,c<l>_actual,...,qnorm,redirect_active_count
  void write_checkpoints_csv(std::ostream& out) const;

 private:
  void take_checkpoint();

  std::size_t n_;
  std::size_t k_;
  std::uint64_t checkpoint_every_;
  std::uint64_t slots_ = 0;
  CompensatedSum virtual_objective_;
  CompensatedSum actual_objective_;
  std::vector<CompensatedSum> constraint_virtual_;
  std::vector<CompensatedSum> constraint_actual_;
  std::vector<double> virtual_visits_;
  std::vector<std::uint64_t> actual_visits_;
  std::vector<double> balance_sum_;
  CompensatedSum belief_shift_;
  std::uint64_t redirect_active_count_ = 0;
  double last_qnorm_ = 0.0;
  std::vector<Checkpoint> checkpoints_;
};

void write_checkpoints_csv(std::ostream& out, std::span<const Checkpoint> checkpoints,
                           std::size_t k);

/// {label: fraction} with fractions rounded to three decimal places.
nlohmann::json occupancy_json(std::span<const double> fractions,
                              std::span<const std::string> labels);

}  // namespace oppmdp
