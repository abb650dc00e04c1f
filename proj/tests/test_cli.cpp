#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pfldg/experiments.hpp"

using namespace pfldg;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_main(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("pfldg_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("defaults") {
  const RunConfig c = parse_config({});
  CHECK(c.experiment == Experiment::all);
  CHECK(c.k == 1);
  CHECK(c.ell() == 2);
  CHECK(c.levels == 3);
  CHECK(c.seed == 42);
  CHECK_FALSE(c.comparison_mode());
}

TEST_CASE("flag parsing") {
  CHECK_THROWS_AS(parse_config({"--k", "5"}), ConfigError);
  CHECK_THROWS_AS(parse_config({"--k", "0"}), ConfigError);
  CHECK_THROWS_AS(parse_config({"--k", "two"}), ConfigError);
  CHECK_THROWS_AS(parse_config({"--levels", "0"}), ConfigError);
  CHECK_THROWS_AS(parse_config({"--bogus", "1"}), ConfigError);
  CHECK_THROWS_AS(parse_config({"run", "nonsense"}), ConfigError);
  CHECK_THROWS_AS(parse_config({"--lifting-degree", "4"}), ConfigError);

  const RunConfig cmp = parse_config({"run", "stability", "--lifting-degree", "k", "--k", "2"});
  CHECK(cmp.experiment == Experiment::stability);
  CHECK(cmp.ell() == 2);
  CHECK(cmp.comparison_mode());

  const RunConfig c = parse_config({"--experiment", "convergence", "--mesh", "fig1_left", "--seed",
                                    "7", "--levels", "2", "--output", "x"});
  CHECK(c.experiment == Experiment::convergence);
  CHECK(c.mesh == "fig1_left");
  CHECK(c.seed == 7);
  CHECK(c.levels == 2);
  CHECK(c.output_dir() == "x");
}

TEST_CASE("config file values are overridden by flags") {
  const fs::path dir = scratch("config");
  fs::create_directories(dir);
  const fs::path file = dir / "run.cfg";
  std::ofstream(file) << "# comment\nexperiment = identities\nk = 2\nlifting-degree = k\nseed = 9\n";
  const RunConfig c = parse_config({"--config", file.string(), "--k", "1"});
  CHECK(c.experiment == Experiment::identities);
  CHECK(c.k == 1);
  CHECK(c.ell() == 1);
  CHECK(c.seed == 9);

  std::ofstream(dir / "bad.cfg") << "k 2\n";
  CHECK_THROWS_AS(parse_config({"--config", (dir / "bad.cfg").string()}), ConfigError);
  std::ofstream(dir / "unknown.cfg") << "colour = red\n";
  CHECK_THROWS_AS(parse_config({"--config", (dir / "unknown.cfg").string()}), ConfigError);
  CHECK_THROWS_AS(parse_config({"--config", (dir / "missing.cfg").string()}), ConfigError);
}

TEST_CASE("exit codes") {
  const fs::path dir = scratch("exit");
  const std::string out = dir.string();

  const Outcome ok = invoke({"run", "counterexample", "--output", out});
  CHECK(ok.code == 0);
  const auto report = nlohmann::json::parse(slurp(dir / "counterexample.json"));
  CHECK(report["passed"] == true);
  CHECK(report["checks"].size() == 4);

  const Outcome irregular = invoke({"run", "stability", "--mesh", "fig1_right", "--output", out});
  CHECK(irregular.code == 2);
  CHECK(irregular.err.find("mesh not face regular") != std::string::npos);

  CHECK(invoke({"--k", "5"}).code == 2);
  CHECK(invoke({"run", "stability", "--mesh-file", (dir / "none.mesh").string(), "--output", out})
            .code == 2);

  std::ofstream(dir / "cc.mesh") << "dim 2\n5\n-1 -1\n1 -1\n1 1\n-1 1\n0 0\n4\n0 1 4\n1 2 4\n2 3 4\n3 0 4\n";
  CHECK(invoke({"run", "stability", "--mesh-file", (dir / "cc.mesh").string(), "--levels", "1",
                "--output", out})
            .code == 0);
  std::ofstream(dir / "broken.mesh") << "dim 2\n3\n0 0\n1 0\n";
  CHECK(invoke({"run", "stability", "--mesh-file", (dir / "broken.mesh").string(), "--output", out})
            .code == 2);

  const Outcome cmp = invoke({"run", "stability", "--lifting-degree", "k", "--levels", "1",
                              "--output", out});
  CHECK(cmp.code == 0);
  CHECK(cmp.out.find("equal_order_c_min_vanishes") != std::string::npos);

  CHECK(invoke({"run", "convergence", "--levels", "2", "--output", out}).code == 2);

  // Rates are recorded but not asserted below unit_square(16).
  const Outcome shallow = invoke({"run", "convergence", "--levels", "3", "--output", out});
  CHECK(shallow.code == 0);
  CHECK(shallow.out.find("rate_l2_finest") == std::string::npos);
  CHECK(invoke({"run", "convergence", "--levels", "4", "--output", out}).out.find(
            "PASS convergence/rate_l2_finest") != std::string::npos);

  // A failed check maps to exit code 1 and still writes both reports.
  ExperimentReport failing;
  failing.experiment = "synthetic";
  failing.csv_header = {"check", "value"};
  failing.checks.push_back(Check::at_least("impossible", 0.0, 1.0));
  RunConfig cfg;
  cfg.output = out;
  std::ostringstream log;
  CHECK(emit({failing}, cfg, log) == 1);
  CHECK(log.str().find("FAIL synthetic/impossible") != std::string::npos);
  CHECK(fs::exists(dir / "synthetic.json"));
  CHECK(fs::exists(dir / "synthetic.csv"));

  CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("a failed check fails the report") {
  ExperimentReport r;
  r.checks.push_back(Check::at_most("small", 1.0, 2.0));
  CHECK(r.passed());
  r.checks.push_back(Check::at_least("large", 1.0, 2.0));
  CHECK_FALSE(r.passed());
  const auto j = nlohmann::json::parse(to_json(r, "2026-01-01T00:00:00Z"));
  CHECK(j["passed"] == false);
  CHECK(j["metadata"]["timestamp"] == "2026-01-01T00:00:00Z");
  CHECK(j["checks"][1]["kind"].is_string());
}

TEST_CASE("convergence CSV layout") {
  const fs::path dir = scratch("conv");
  CHECK(invoke({"run", "convergence", "--k", "1", "--levels", "4", "--output", dir.string()}).code ==
        0);
  std::ifstream in(dir / "convergence.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "level,h,dofs,err_l2,err_h1broken,err_1h,rate_l2,rate_h1");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 4);
}

TEST_CASE("same seed reproduces the CSV byte for byte") {
  const fs::path a = scratch("repro_a"), b = scratch("repro_b");
  for (const auto& dir : {a, b}) {
    CHECK(invoke({"run", "identities", "--mesh", "fig1_left", "--seed", "3", "--output",
                  dir.string()})
              .code == 0);
    CHECK(invoke({"run", "stability", "--mesh", "unit_square(2)", "--levels", "2", "--output",
                  dir.string()})
              .code == 0);
  }
  for (const std::string name : {"identities.csv", "stability.csv"}) {
    CHECK(slurp(a / name) == slurp(b / name));
  }
  auto ja = nlohmann::json::parse(slurp(a / "stability.json"));
  auto jb = nlohmann::json::parse(slurp(b / "stability.json"));
  ja.erase("metadata");
  jb.erase("metadata");
  CHECK(ja == jb);
}

TEST_CASE("output directory falls back to the environment") {
  const fs::path dir = scratch("env");
  setenv("LDG_OUTPUT_DIR", dir.string().c_str(), 1);
  CHECK(parse_config({}).output_dir() == dir.string());
  unsetenv("LDG_OUTPUT_DIR");
  CHECK(parse_config({}).output_dir() == "ldg_output");
}
