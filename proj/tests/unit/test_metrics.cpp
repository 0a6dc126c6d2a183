#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "oppmdp/envs/robot.hpp"
#include "oppmdp/envs/synthetic.hpp"
#include "oppmdp/metrics/metrics.hpp"

using namespace oppmdp;

namespace {

template <class M>
RunMetrics run_metrics(const M& model, std::uint64_t seed, std::uint64_t slots,
                       std::uint64_t every = 0, LearnerConfig lc = {}) {
  Learner<M> learner(model, lc, 0);
  RngStreams rng(seed);
  RunMetrics m(model.num_states(), model.num_constraints(), every);
  for (std::uint64_t t = 0; t < slots; ++t) {
    const auto& rec = learner.step(rng);
    m.record(rec, learner.belief().probabilities(), learner.queues());
  }
  return m;
}

}  // namespace

TEST_CASE("zero costs give zero averages") {
  const RunMetrics m = run_metrics(synthetic::constant_cost(0.0), 1, 1'000);
  const MetricsReport r = m.finalize();
  CHECK(r.r_virtual == 0.0);
  CHECK(r.r_actual == 0.0);
}

TEST_CASE("occupancy fractions sum to one") {
  robot::RobotConfig rc;
  rc.power_constraint = true;
  const robot::RobotEnv env(rc);
  const MetricsReport r = run_metrics(env, 2, 20'000).finalize();
  double v = 0.0, a = 0.0;
  for (double x : r.virtual_occupancy) v += x;
  for (double x : r.actual_occupancy) a += x;
  CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(a == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.constraint_virtual.size() == 1);
}

TEST_CASE("virtual balance inequality holds on every run") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const robot::RobotEnv env;
    Learner<robot::RobotEnv> learner(env, LearnerConfig{}, 0);
    RngStreams rng(seed);
    RunMetrics m(env.num_states(), 0);
    for (int t = 0; t < 20'000; ++t) {
      const auto& rec = learner.step(rng);
      m.record(rec, learner.belief().probabilities(), learner.queues());
    }
    const auto next = learner.peek_next();
    const BalanceCheck check = m.balance_check(next.queues, next.shift);
    CAPTURE(check.min_slack);
    CHECK(check.holds());
  }
}

TEST_CASE("peek_next agrees with the next step") {
  const FiniteInstance inst = synthetic::ladder();
  Learner<FiniteInstance> learner(inst, LearnerConfig{}, 0);
  RngStreams rng(3);
  for (int t = 0; t < 100; ++t) learner.step(rng);
  const auto peek = learner.peek_next();
  learner.step(rng);
  for (std::size_t i = 0; i < inst.num_states(); ++i) {
    CHECK(peek.belief[i] == learner.belief()[i]);
    CHECK(peek.queues.q[i] == learner.queues().q[i]);
  }
}

TEST_CASE("merge is the sum of its parts") {
  const FiniteInstance inst = synthetic::gamble();
  RunMetrics a = run_metrics(inst, 1, 3'000);
  const RunMetrics b = run_metrics(inst, 2, 5'000);
  RunMetrics ab = a, ba = b;
  ab.merge(b);
  ba.merge(a);
  const MetricsReport x = ab.finalize(), y = ba.finalize();
  CHECK(x.slots == 8'000);
  CHECK(x.r_virtual == doctest::Approx(y.r_virtual).epsilon(1e-14));
  CHECK(x.r_virtual == doctest::Approx((3'000 * a.finalize().r_virtual + 5'000 * b.finalize().r_virtual) / 8'000));
  CHECK_THROWS_AS(a.merge(RunMetrics(7, 0)), std::invalid_argument);
}

TEST_CASE("empty run and checkpoint CSV") {
  CHECK_THROWS_AS(RunMetrics(2, 0).finalize(), std::logic_error);
  robot::RobotConfig rc;
  rc.power_constraint = true;
  const RunMetrics m = run_metrics(robot::RobotEnv(rc), 4, 1'000, 250);
  CHECK(m.checkpoints().size() == 4);
  std::ostringstream csv;
  m.write_checkpoints_csv(csv);
  std::istringstream in(csv.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,r_virtual,r_actual,c1_virtual,c1_actual,qnorm,redirect_active_count");
}

TEST_CASE("occupancy JSON rounds to three places") {
  const std::vector<double> f{0.12345, 0.0004, 0.87615};
  const std::vector<std::string> labels{"a", "b", "c"};
  const auto j = occupancy_json(f, labels);
  CHECK(j["a"].get<double>() == doctest::Approx(0.123));
  CHECK(j["b"].get<double>() == 0.0);
  CHECK(j["c"].get<double>() == doctest::Approx(0.876));
}
