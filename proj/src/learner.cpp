#include "oppmdp/learner/learner.hpp"

#include <cmath>

namespace oppmdp {

void RedirectConfig::validate() const {
  if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError("redirect gamma must lie in (0, 1)");
  if (!(theta_low < theta_high)) throw ConfigError("redirect needs theta_low < theta_high");
}

void LearnerConfig::validate() const {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("V must be positive");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ConfigError("alpha must be positive");
  if (horizon == 0) throw ConfigError("horizon T must be positive");
  if (redirect) redirect->validate();
}

double VirtualQueues::norm() const {
  double s = 0.0;
  for (double x : q) s += x * x;
  for (double x : z) s += x * x;
  return std::sqrt(s);
}

void layer1_scores(const SlotMatrices& previous, const VirtualQueues& queues, double v,
                   std::span<double> out) {
  const std::size_t n = previous.n;
  const std::size_t k = previous.k;
  kernels::matvec(previous.y, n, n, queues.q, out);
  kernels::axpy(v, previous.g0, out);
  if (k > 0) {
    for (StateIndex i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t l = 0; l < k; ++l) s += previous.g[i * k + l] * queues.z[l];
      out[i] += s;
    }
  }
}

BeliefVector layer1_update(const BeliefVector& prev, const SlotMatrices& previous,
                           const VirtualQueues& queues, double v, double alpha) {
  std::vector<double> scores(prev.size());
  layer1_scores(previous, queues, v, scores);
  BeliefVector next = prev;
  next.reweight(scores, alpha);
  return next;
}

void update_queues(VirtualQueues& queues, std::span<const double> pi, const SlotMatrices& previous,
                   std::span<double> increment) {
  const std::size_t n = previous.n;
  const std::size_t k = previous.k;
  kernels::vecmat(pi, previous.y, n, n, increment);
  for (StateIndex j = 0; j < n; ++j) queues.q[j] += increment[j];
  for (std::size_t l = 0; l < k; ++l) {
    double s = 0.0;
    for (StateIndex i = 0; i < n; ++i) s += pi[i] * previous.g[i * k + l];
    queues.z[l] = std::max(queues.z[l] + s, 0.0);
  }
}

}  // namespace oppmdp
