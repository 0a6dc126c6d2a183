// Acceptance suite. Prints one PASS/FAIL line per criterion.
//
//   acceptance            run all criteria
//   acceptance 2 5        run a subset
//
// Exit status is nonzero when any selected criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "../support/properties.hpp"
#include "oppmdp/baselines/heuristics.hpp"
#include "oppmdp/baselines/j_baseline.hpp"
#include "oppmdp/envs/robot.hpp"
#include "oppmdp/envs/synthetic.hpp"
#include "oppmdp/experiment/experiment.hpp"
#include "oppmdp/oracle/oracle.hpp"

namespace {

using namespace oppmdp;
using experiment::ExperimentConfig;

struct Verdict {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool within(double x, double target, double tol) { return std::abs(x - target) <= tol; }

ExperimentConfig robot_run(double u, std::uint64_t seed, bool redirect) {
  ExperimentConfig c;
  c.u = u;
  c.seed = seed;
  c.redirect = redirect;
  return c;
}

Verdict criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  baselines::HeuristicConfig c;
  c.which = 1;
  c.u = 4.0;
  const auto h1 = baselines::heuristic_value(c);
  c.which = 2;
  const auto h2 = baselines::heuristic_value(c);
  c.power_budget = 0.9;
  const auto h2p = baselines::heuristic_value(c);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool ok = within(h1.reward, 0.33616, 1e-3) && within(h1.thresholds[0], 1.6808, 1e-3) &&
                  within(h2.reward, 0.66791, 1e-3) && within(h2.thresholds[0], 12.690, 1e-3) &&
                  within(h2p.thresholds[0], 17.2093, 1e-3) && within(h2p.reward, 0.55814, 1e-3) &&
                  within(*h2p.power, 0.9, 1e-3) && secs < 1.0;
  return {ok, fmt("H1 %.5f@%.4f H2 %.5f@%.3f H2(p<=0.9) %.5f@%.4f p=%.4f in %.2fs", h1.reward,
                  h1.thresholds[0], h2.reward, h2.thresholds[0], h2p.reward, h2p.thresholds[0],
                  *h2p.power, secs)};
}

Verdict criterion2() {
  double rv = 0.0, ra = 0.0;
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto o = experiment::run(robot_run(4.0, seed, true));
    rv += o.report.r_virtual / 3.0;
    ra += o.report.r_actual / 3.0;
  }
  const bool ok = rv >= 0.647 && rv <= 0.687 && ra >= 0.640 && ra <= 0.680;
  return {ok, fmt("mean over 3 seeds: virtual %.4f (want [0.647,0.687]) actual %.4f (want [0.640,0.680])", rv, ra)};
}

Verdict criterion3() {
  bool ok = true;
  std::string detail;
  for (double alpha : {5.0, 25.0, 50.0, 100.0, 1000.0}) {
    ExperimentConfig c = robot_run(4.0, 11, true);
    c.alpha = alpha;
    const double rv = experiment::run(c).report.r_virtual;
    const bool good = alpha < 40.0 ? rv < 0.1 : rv > 0.60;
    ok = ok && good;
    detail += fmt("a=%g:%.4f%s ", alpha, rv, good ? "" : "(!)");
  }
  return {ok, detail};
}

// Proposed actual reward per u with redirect; shared with criterion 8.
std::map<int, double>& proposed_actual() {
  static std::map<int, double> cache;
  if (cache.empty())
    for (int u = 4; u <= 10; ++u) cache[u] = experiment::run(robot_run(u, 21, true)).report.r_actual;
  return cache;
}

double cell20_fraction(const std::vector<double>& occ) {
  return occ[robot::state_index({20, false})] + occ[robot::state_index({20, true})];
}

Verdict criterion4() {
  bool ok = true;
  std::string detail;
  for (int u = 4; u <= 10; ++u) {
    const double target = baselines::best_heuristic_reward(u);
    const double ra = proposed_actual()[u];
    const bool good = within(ra, target, 0.03);
    ok = ok && good;
    detail += fmt("u=%d:%.4f/%.4f%s ", u, ra, target, good ? "" : "(!)");
  }
  for (int u : {9, 10}) {
    int traps = 0;
    for (std::uint64_t seed = 1; seed <= 5 && traps == 0; ++seed) {
      const auto o = experiment::run(robot_run(u, seed, false));
      if (cell20_fraction(o.report.actual_occupancy) > 0.5 &&
          cell20_fraction(o.report.virtual_occupancy) < 1e-3)
        traps = static_cast<int>(seed);
    }
    ok = ok && traps > 0;
    detail += traps > 0 ? fmt("trap(u=%d) at seed %d ", u, traps) : fmt("no trap at u=%d ", u);
  }
  return {ok, detail};
}

Verdict criterion5() {
  ExperimentConfig c = robot_run(4.0, 5, true);
  c.power_constraint = true;
  const auto o = experiment::run(c);
  const double pv = o.report.constraint_virtual[0] + c.power_budget;
  const double pa = o.report.constraint_actual[0] + c.power_budget;
  const double rv = o.report.r_virtual, ra = o.report.r_actual;
  const bool ok = within(rv, 0.5693, 0.03) && within(pv, 0.8996, 0.03) && within(ra, 0.5559, 0.04) &&
                  within(pa, 0.8859, 0.04) && pa <= 0.93;
  return {ok, fmt("virtual (%.4f, %.4f) actual (%.4f, %.4f)", rv, pv, ra, pa)};
}

Verdict criterion6() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<std::pair<std::string, FiniteInstance>> instances{
      {"toggle", synthetic::toggle()}, {"ladder", synthetic::ladder()}, {"gamble", synthetic::gamble()}};
  constexpr std::uint64_t kSlots = 100'000;
  constexpr int kSeeds = 20;
  LearnerConfig lc;
  lc.v = 2.0;
  lc.alpha = 100.0;
  lc.horizon = kSlots;
  bool ok = true;
  std::string detail;
  for (const auto& [name, inst] : instances) {
    const OracleResult oracle = solve_unconstrained(inst);
    std::vector<double> costs;
    for (int s = 0; s < kSeeds; ++s) {
      Learner<FiniteInstance> learner(inst, lc, inst.initial_state());
      RngStreams rng(experiment::sweep_seed(606, static_cast<double>(s), 0));
      CompensatedSum total;
      for (std::uint64_t t = 0; t < kSlots; ++t) total.add(learner.step(rng).virtual_objective);
      costs.push_back(total.value() / static_cast<double>(kSlots));
    }
    double mean = 0.0, var = 0.0;
    for (double c : costs) mean += c / kSeeds;
    for (double c : costs) var += (c - mean) * (c - mean) / (kSeeds - 1);
    const double se = std::sqrt(var / kSeeds);
    const double gap = mean - oracle.c0_star;
    const double rhs = cost_bound_rhs(oracle.c0_star, lc.v, lc.alpha, kSlots, inst.num_states(),
                                      inst.num_constraints(), inst.cost_bound());
    const bool good = gap <= rhs + 2.0 * se && gap >= -2.0 * se;
    ok = ok && good;
    detail += fmt("%s: c0*=%.4f gap=%.2e se=%.1e rhs=%.3f%s; ", name.c_str(), oracle.c0_star, gap, se,
                  rhs, good ? "" : "(!)");
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  ok = ok && secs < 60.0;
  return {ok, detail + fmt("%.1fs", secs)};
}

Verdict criterion7() {
  const std::vector<std::pair<const char*, props::Outcome>> checks{
      {"simplex", props::simplex_invariants(71, 10'000)},
      {"queues", props::queue_invariants(72, 10'000)},
      {"telescoping", props::telescoping(73, 10'000)},
      {"kl", props::kl_bounds(74, 10'000)},
      {"pushback", props::pushback(75, 1'000)},
      {"layer2", props::layer2_exhaustive(76, 1'000)},
      {"conditional", props::conditional_equivalence(77, 200'000)},
      {"walls", props::wall_certification()}};
  bool ok = true;
  std::string detail;
  for (const auto& [name, o] : checks) {
    ok = ok && o.ok;
    detail += std::string(name) + (o.ok ? " ok" : " FAILED") + " (" + o.detail + "); ";
  }
  return {ok, detail};
}

Verdict criterion8() {
  bool ok = true;
  std::string detail;
  for (int u = 4; u <= 10; ++u) {
    robot::RobotConfig rc;
    rc.u = u;
    const robot::RobotEnv env(rc);
    RngStreams rng(21);
    const auto j = baselines::run_j_baseline(env, baselines::JBaselineState(env.num_states()),
                                             env.home_state(), 1'000'000, rng);
    const double ra = proposed_actual()[u];
    const bool good = within(j.reward, ra, 0.05);
    ok = ok && good;
    detail += fmt("u=%d:J=%.4f/ours=%.4f%s ", u, j.reward, ra, good ? "" : "(!)");
  }
  return {ok, detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<int, std::function<Verdict()>> criteria{
      {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4},
      {5, criterion5}, {6, criterion6}, {7, criterion7}, {8, criterion8}};
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  if (selected.empty())
    for (const auto& [id, fn] : criteria) selected.push_back(id);

  bool all = true;
  for (int id : selected) {
    const auto it = criteria.find(id);
    if (it == criteria.end()) {
      std::printf("criterion %d: FAIL unknown criterion\n", id);
      all = false;
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v{false, ""};
    try {
      v = it->second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %d: %s %s [%.1fs]\n", id, v.pass ? "PASS" : "FAIL", v.detail.c_str(), secs);
    std::fflush(stdout);
    all = all && v.pass;
  }
  return all ? 0 : 1;
}
