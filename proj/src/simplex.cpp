#include "oppmdp/core/simplex.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "oppmdp/kernels/kernels.hpp"

namespace oppmdp {

BeliefVector BeliefVector::uniform(std::size_t n) {
  BeliefVector b;
  b.log_weights_.assign(n, -std::log(static_cast<double>(n)));
  b.probabilities_.assign(n, 1.0 / static_cast<double>(n));
  return b;
}

BeliefVector BeliefVector::from_probabilities(std::span<const double> p) {
  BeliefVector b;
  b.log_weights_.resize(p.size());
  b.probabilities_.resize(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] > 0.0)) throw InvalidDistribution("belief entries must be strictly positive");
    b.log_weights_[i] = std::log(p[i]);
  }
  b.normalize();
  return b;
}

void BeliefVector::reweight(std::span<const double> scores, double temperature) {
  const double scale = -1.0 / temperature;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!std::isfinite(scores[i]))
      throw NumericError("non-finite Layer-1 weight at state " + std::to_string(i));
  }
  kernels::axpy(scale, scores, log_weights_);
  normalize();
}

void BeliefVector::normalize() {
  const double top = kernels::max(log_weights_);
  if (!std::isfinite(top)) throw NumericError("belief log weights are not finite");
  for (std::size_t i = 0; i < log_weights_.size(); ++i) {
    log_weights_[i] -= top;
    probabilities_[i] = std::exp(log_weights_[i]);
  }
  const double total = kernels::sum(probabilities_);
  const double log_total = std::log(total);
  const double inv_total = 1.0 / total;
  for (std::size_t i = 0; i < log_weights_.size(); ++i) {
    log_weights_[i] -= log_total;
    probabilities_[i] *= inv_total;
  }
}

namespace {

void check_distribution(std::span<const double> q) {
  double total = 0.0;
  for (double v : q) {
    if (!(v >= 0.0)) throw InvalidDistribution("probability mass function has a negative entry");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw InvalidDistribution("probability mass function sums to " + std::to_string(total));
}

}  // namespace

StateIndex sample_state(std::span<const double> q, double r) {
  check_distribution(q);
  double cumulative = 0.0;
  StateIndex last_positive = 0;
  for (StateIndex j = 0; j < q.size(); ++j) {
    if (q[j] > 0.0) last_positive = j;
    cumulative += q[j];
    if (r < cumulative) return j;
  }
  // r landed in the rounding gap above the last partial sum.
  return last_positive;
}

StateIndex sample_state(std::span<const Transition> row, double r) {
  if (row.empty()) throw InvalidDistribution("empty transition row");
  double total = 0.0;
  for (const Transition& t : row) {
    if (!(t.probability >= 0.0)) throw InvalidDistribution("negative transition probability");
    total += t.probability;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw InvalidDistribution("transition row sums to " + std::to_string(total));
  double cumulative = 0.0;
  for (const Transition& t : row) {
    cumulative += t.probability;
    if (r < cumulative) return t.next;
  }
  for (auto it = row.rbegin(); it != row.rend(); ++it)
    if (it->probability > 0.0) return it->next;
  return row.back().next;
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw InvalidDistribution("kl_divergence: size mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(q[i] > 0.0)) throw InvalidDistribution("kl_divergence: q must be strictly positive");
    if (p[i] > 0.0) d += p[i] * std::log(p[i] / q[i]);
  }
  // Rounding can push an exact zero slightly negative.
  return d < 0.0 ? 0.0 : d;
}

double l1_distance(std::span<const double> p, std::span<const double> q) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return s;
}

}  // namespace oppmdp
