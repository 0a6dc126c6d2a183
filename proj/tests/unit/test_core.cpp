#include <cmath>
#include <vector>

#include "../support/properties.hpp"
#include "doctest.h"
#include "oppmdp/core/compensated_sum.hpp"
#include "oppmdp/core/finite_instance.hpp"
#include "oppmdp/core/rng.hpp"
#include "oppmdp/core/simplex.hpp"
#include "oppmdp/envs/synthetic.hpp"

using namespace oppmdp;

TEST_CASE("sample_state follows the half-open inverse CDF") {
  CHECK(sample_state(std::vector<double>{1, 0, 0}, 0.99) == 0);
  CHECK(sample_state(std::vector<double>{0.5, 0.5}, 0.6) == 1);
  CHECK(sample_state(std::vector<double>{0.25, 0.25, 0.5}, 0.25) == 1);
  CHECK(sample_state(std::vector<double>{0.25, 0.25, 0.5}, 0.0) == 0);
  CHECK(sample_state(std::vector<double>{0.25, 0.25, 0.5}, 1.0) == 2);
  CHECK_THROWS_AS(sample_state(std::vector<double>{0.5, 0.6}, 0.1), InvalidDistribution);
  const std::vector<Transition> row{{3, 0.25}, {1, 0.75}};
  CHECK(sample_state(std::span<const Transition>(row), 0.1) == 3);
  CHECK(sample_state(std::span<const Transition>(row), 0.5) == 1);
}

TEST_CASE("kl divergence examples") {
  const std::vector<double> u(4, 0.25);
  CHECK(kl_divergence(u, u) == doctest::Approx(0.0));
  CHECK(kl_divergence(std::vector<double>{1, 0}, std::vector<double>{0.5, 0.5}) ==
        doctest::Approx(0.693147).epsilon(1e-6));
  CHECK_THROWS_AS(kl_divergence(std::vector<double>{0.5, 0.5}, std::vector<double>{1, 0}),
                  InvalidDistribution);
}

TEST_CASE("Pinsker and log n bounds over 10^4 random pairs") {
  const auto o = props::kl_bounds(1, 10'000);
  INFO(o.detail);
  CHECK(o.ok);
}

TEST_CASE("belief reweighting") {
  SUBCASE("equal scores leave the belief unchanged") {
    BeliefVector b = BeliefVector::from_probabilities(std::vector<double>{0.2, 0.3, 0.5});
    b.reweight(std::vector<double>{7, 7, 7}, 3.0);
    CHECK(b[0] == doctest::Approx(0.2));
    CHECK(b[2] == doctest::Approx(0.5));
  }
  SUBCASE("two-state closed form") {
    const double alpha = 10.0;
    BeliefVector b = BeliefVector::uniform(2);
    b.reweight(std::vector<double>{0.0, alpha * std::log(3.0)}, alpha);
    CHECK(b[0] == doctest::Approx(0.75));
    CHECK(b[1] == doctest::Approx(0.25));
  }
  SUBCASE("huge exponents stay finite and recoverable") {
    BeliefVector b = BeliefVector::uniform(2);
    b.reweight(std::vector<double>{0.0, 1e6}, 1.0);
    CHECK(b[1] == 0.0);
    CHECK(std::isfinite(b.log_weights()[1]));
    b.reweight(std::vector<double>{1e6 + 10.0, 0.0}, 1.0);
    CHECK(b[1] > 0.99);
  }
  SUBCASE("non-finite scores are rejected") {
    BeliefVector b = BeliefVector::uniform(2);
    CHECK_THROWS_AS(b.reweight(std::vector<double>{0.0, NAN}, 1.0), NumericError);
  }
}

TEST_CASE("rng streams are seed-stable and distinct") {
  RngStreams a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.w.bits();
    CHECK(x == b.w.bits());
    CHECK(x != c.w.bits());
  }
  RngStreams d(42);
  CHECK(d.w.bits() != d.u.bits());
  for (int i = 0; i < 1000; ++i) {
    const double u = d.v.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("compensated sum keeps small terms") {
  CompensatedSum s;
  s.add(1e16);
  for (int i = 0; i < 1000; ++i) s.add(1.0);
  s.add(-1e16);
  CHECK(s.value() == 1000.0);
  CompensatedSum a, b;
  a.add(0.1);
  b.add(0.2);
  a.merge(b);
  CHECK(a.value() == doctest::Approx(0.3));
}

TEST_CASE("finite instance JSON round trip and validation") {
  const FiniteInstance t = synthetic::toggle();
  const FiniteInstance back = FiniteInstance::from_json(t.to_json());
  CHECK(back.to_json() == t.to_json());
  auto bad = t.to_json();
  bad["menus"][0][0][0]["next"] = {0.7, 0.7};
  CHECK_THROWS_AS(FiniteInstance::from_json(bad), ConfigError);
  bad = t.to_json();
  bad["menus"][0][0][0]["costs"] = {5.0};
  CHECK_THROWS_AS(FiniteInstance::from_json(bad), ConfigError);
}
