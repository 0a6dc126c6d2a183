#pragma once

#include <span>
#include <vector>

#include "oppmdp/core/types.hpp"

namespace oppmdp {

/// A point of the open probability simplex held in log domain.
///
/// The log weights are kept normalized (log-sum-exp equal to zero), so
/// probabilities()[i] == exp(log_weights()[i]). A weight far below the
/// largest one underflows to 0 in the linear readout while its log value is
/// retained, which lets a multiplicative update bring it back later.
class BeliefVector {
 public:
  BeliefVector() = default;

  static BeliefVector uniform(std::size_t n);

  /// Builds from strictly positive probabilities (renormalized).
  static BeliefVector from_probabilities(std::span<const double> p);

  std::size_t size() const noexcept { return log_weights_.size(); }
  std::span<const double> log_weights() const noexcept { return log_weights_; }
  std::span<const double> probabilities() const noexcept { return probabilities_; }
  double operator[](std::size_t i) const noexcept { return probabilities_[i]; }

  /// Multiplies weight i by exp(-scores[i] / temperature) and renormalizes.
  /// Throws NumericError if any score is non-finite.
  void reweight(std::span<const double> scores, double temperature);

 private:
  void normalize();

  std::vector<double> log_weights_;
  std::vector<double> probabilities_;
};

/// Inverse-CDF state selection: smallest j with q_0 + ... + q_j > r.
/// Throws InvalidDistribution if q is not a probability vector within 1e-9.
StateIndex sample_state(std::span<const double> q, double r);

/// Same rule over a sparse row (entries in any order of index; selection is
/// by row order).
StateIndex sample_state(std::span<const Transition> row, double r);

/// K-L divergence D(p; q) = sum p_i log(p_i / q_i), with 0 log 0 = 0.
/// Throws InvalidDistribution if some q_i <= 0 or sizes differ.
double kl_divergence(std::span<const double> p, std::span<const double> q);

double l1_distance(std::span<const double> p, std::span<const double> q);

}  // namespace oppmdp
