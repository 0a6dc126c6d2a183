#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"
#include "oppmdp/envs/synthetic.hpp"
#include "oppmdp/experiment/experiment.hpp"

using namespace oppmdp;
using namespace oppmdp::experiment;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("oppmdp_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int cli(const std::string& args, const fs::path& out = "/dev/null") {
  const std::string cmd = std::string(OPPMDP_CLI_PATH) + " " + args + " > " + out.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("manifest round trip reproduces the metrics CSV bit for bit") {
  const fs::path dir = scratch_dir("roundtrip");
  ExperimentConfig c;
  c.horizon = 20'000;
  c.seed = 31;
  c.u = 6.0;
  const RunOutcome first = run(c);
  write_artifacts(c, first, dir / "a");
  const ExperimentConfig again = ExperimentConfig::load(dir / "a" / "manifest.json");
  write_artifacts(again, run(again), dir / "b");
  CHECK(slurp(dir / "a" / "metrics.csv") == slurp(dir / "b" / "metrics.csv"));
  CHECK(slurp(dir / "a" / "occupancy.json") == slurp(dir / "b" / "occupancy.json"));
  const auto occ = nlohmann::json::parse(slurp(dir / "a" / "occupancy.json"));
  CHECK(occ["virtual"].contains("(9,0)"));
}

TEST_CASE("sweep rows equal independent runs at the derived seeds") {
  ExperimentConfig c;
  c.horizon = 5'000;
  c.seed = 3;
  c.seeds_per_point = 2;
  c.workers = 2;
  const std::vector<double> values{50.0, 200.0};
  const auto rows = sweep(c, "alpha", values);
  REQUIRE(rows.size() == 4);
  for (std::size_t p = 0; p < values.size(); ++p) {
    for (unsigned r = 0; r < 2; ++r) {
      ExperimentConfig single = with_parameter(c, "alpha", values[p]);
      single.seed = sweep_seed(c.seed, values[p], r);
      const auto o = run(single);
      CHECK(rows[2 * p].samples[r] == o.report.r_virtual);
      CHECK(rows[2 * p + 1].samples[r] == o.report.r_actual);
    }
  }
  CHECK_THROWS_AS(sweep(c, "alpha", {}), ConfigError);
  CHECK_THROWS_AS(sweep(c, "gamma", {1.0}), ConfigError);
  CHECK(sweep_seed(1, 4.0, 0) != sweep_seed(1, 5.0, 0));
  CHECK(sweep_seed(1, 4.0, 0) != sweep_seed(1, 4.0, 1));
}

TEST_CASE("config file values yield to flags") {
  nlohmann::json j{{"V", 3.0}, {"alpha", 40.0}, {"redirect", "off"}};
  const ExperimentConfig c = ExperimentConfig::from_json(j);
  CHECK(c.v == 3.0);
  CHECK(c.alpha == 40.0);
  CHECK_FALSE(c.redirect);
  CHECK(c.u == 4.0);
  CHECK_THROWS_AS(ExperimentConfig::from_json(nlohmann::json{{"V", "five"}}), ConfigError);
  ExperimentConfig bad;
  bad.env = "maze";
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  const fs::path dir = scratch_dir("flags");
  std::ofstream(dir / "cfg.json") << nlohmann::json{{"T", 1000}, {"alpha", 40.0}, {"seed", 5}}.dump();
  CHECK(cli("run --config " + (dir / "cfg.json").string() + " --alpha 60 --out " + (dir / "o").string()) == 0);
  const auto m = nlohmann::json::parse(slurp(dir / "o" / "manifest.json"));
  CHECK(m["config"]["alpha"].get<double>() == 60.0);
  CHECK(m["config"]["T"].get<std::uint64_t>() == 1000);
  CHECK(m["seed"].get<std::uint64_t>() == 5);
}

TEST_CASE("command-line exit codes") {
  CHECK(cli("run --T 0") == 2);
  CHECK(cli("run --V -1 --T 10") == 2);
  CHECK(cli("run --env synthetic --T 10") == 2);
  CHECK(cli("sweep --param alpha --values '' --T 10") == 2);
  CHECK(cli("run --bogus") == 2);
  CHECK(cli("run --T 2000 --seed 1") == 0);
}

TEST_CASE("synthetic run and oracle subcommand") {
  const fs::path dir = scratch_dir("synthetic");
  std::ofstream(dir / "toggle.json") << synthetic::toggle().to_json().dump();
  std::ofstream(dir / "single.json")
      << synthetic::single_state({0.5, 0.5}, {{0.2, -0.4}, {0.6}}).to_json().dump();
  CHECK(cli("oracle --instance " + (dir / "single.json").string(), dir / "oracle.json") == 0);
  const auto o = nlohmann::json::parse(slurp(dir / "oracle.json"));
  CHECK(o["c0_star"].get<double>() == doctest::Approx(0.5 * -0.4 + 0.5 * 0.6));

  CHECK(cli("run --env synthetic --instance " + (dir / "toggle.json").string() +
                " --V 2 --alpha 100 --T 100000 --redirect off",
            dir / "run.json") == 0);
  const auto r = nlohmann::json::parse(slurp(dir / "run.json"));
  const double rhs = 1.5 * 2 * (1 + 1e-5) / 2 + 2 * (1 + 1e-5) / 200 + 0.5e-5 + 100 * std::log(2.0) / 2e5;
  CHECK(-r["r_virtual"].get<double>() - (-0.5) <= rhs);

  CHECK(cli("heuristic --which 2", dir / "h.json") == 0);
  const auto h = nlohmann::json::parse(slurp(dir / "h.json"));
  CHECK(h["reward"].get<double>() == doctest::Approx(0.66791).epsilon(1e-4));
}
