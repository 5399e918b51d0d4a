// End-to-end checks of the CLI binary via a shell. The binary path comes in
// through UWVSIM_CLI_PATH at compile time.

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("uwvsim_cli_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

int run_cli(const std::string& args) {
  std::string cmd = std::string(UWVSIM_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Non-comment CSV body with the timing column blanked, for determinism
// comparisons.
std::string stable_csv(const fs::path& p) {
  std::ifstream in(p);
  std::string line, out;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') continue;
    std::string filtered;
    int field = 0;
    for (char c : line) {
      if (c == ',') {
        ++field;
        filtered += c;
      } else if (field != 4) {  // mean_decision_time_s
        filtered += c;
      }
    }
    out += filtered + "\n";
  }
  return out;
}

}  // namespace

TEST_CASE("cli end to end: generate, run, experiment, compare") {
  TempDir dir;
  auto scenario = (dir.path / "tiny.json").string();
  auto metrics = (dir.path / "metrics.json").string();
  auto trace = (dir.path / "trace.jsonl").string();
  auto table = (dir.path / "results.csv").string();
  auto deltas = (dir.path / "deltas.csv").string();

  REQUIRE(run_cli("generate --width 12 --height 12 --tasks 6 --charges 2 --workers 4 "
                  "--uavs 3 --vehicles 1 --online-time 40 --horizon 40 --radius 15 "
                  "--seed 5 --out " + scenario) == 0);
  CHECK(fs::exists(scenario));

  REQUIRE(run_cli("run --scenario " + scenario +
                  " --algorithm paln --interval 5 --limit-time 40 --seed 2 --out " + metrics +
                  " --trace " + trace) == 0);
  CHECK(fs::exists(metrics));
  CHECK(fs::exists(trace));
  CHECK(slurp(metrics).find("completion_rate") != std::string::npos);

  REQUIRE(run_cli("experiment --scenario " + scenario +
                  " --algorithms paln,greedy --seeds 1,2 --limit-time 40 --out " + table +
                  " --runs-dir " + (dir.path / "runs").string()) == 0);
  auto body = slurp(table);
  CHECK(body.find("# hardware:") != std::string::npos);
  CHECK(body.find("paln") != std::string::npos);
  CHECK(body.find("greedy") != std::string::npos);
  CHECK(body.find("mean") != std::string::npos);
  CHECK(body.find("stddev") != std::string::npos);
  CHECK(fs::exists(table + ".manifest.json"));
  CHECK(!fs::is_empty(dir.path / "runs"));

  REQUIRE(run_cli("compare --table " + table + " --baseline greedy --candidate paln --out " +
                  deltas) == 0);
  auto pair_body = slurp(deltas);
  CHECK(pair_body.find("completion_delta_pp") != std::string::npos);

  // Self-comparison leaves zero deltas.
  REQUIRE(run_cli("compare --table " + table + " --baseline paln --candidate paln --out " +
                  deltas) == 0);
  for (const auto& line : {std::string("0.000000")})
    CHECK(slurp(deltas).find(line) != std::string::npos);
}

TEST_CASE("cli experiment rerun reproduces the deterministic columns") {
  TempDir dir;
  auto scenario = (dir.path / "tiny.json").string();
  auto t1 = (dir.path / "r1.csv").string();
  auto t2 = (dir.path / "r2.csv").string();
  REQUIRE(run_cli("generate --tasks 5 --charges 2 --workers 3 --uavs 2 --vehicles 1 "
                  "--width 10 --height 10 --online-time 30 --horizon 30 --radius 12 "
                  "--seed 9 --out " + scenario) == 0);
  REQUIRE(run_cli("experiment --scenario " + scenario +
                  " --algorithms raln,kwta --intervals 5,10 --seeds 3,4 --limit-time 30 "
                  "--out " + t1) == 0);
  REQUIRE(run_cli("experiment --scenario " + scenario +
                  " --algorithms raln,kwta --intervals 5,10 --seeds 3,4 --limit-time 30 "
                  "--out " + t2) == 0);
  CHECK(stable_csv(t1) == stable_csv(t2));
  // 2 algorithms x 2 intervals x 2 seeds plus mean/stddev rows per group.
  CHECK(stable_csv(t1).find("@i10") != std::string::npos);
}

TEST_CASE("cli failure modes exit nonzero") {
  TempDir dir;
  CHECK(run_cli("run --scenario /nonexistent.json") != 0);
  CHECK(run_cli("generate --tasks -3 --out " + (dir.path / "x.json").string()) != 0);
  CHECK(run_cli("bogus-subcommand") != 0);

  // Unpaired compare cells are rejected.
  auto scenario = (dir.path / "s.json").string();
  auto table = (dir.path / "t.csv").string();
  REQUIRE(run_cli("generate --tasks 4 --charges 1 --workers 2 --uavs 1 --vehicles 1 "
                  "--width 8 --height 8 --online-time 20 --horizon 20 --radius 10 "
                  "--seed 1 --out " + scenario) == 0);
  REQUIRE(run_cli("experiment --scenario " + scenario +
                  " --algorithms paln --seeds 1 --limit-time 20 --out " + table) == 0);
  CHECK(run_cli("compare --table " + table + " --baseline greedy --candidate paln") != 0);
}

TEST_CASE("cli experiment accepts a JSON plan with inline specs") {
  TempDir dir;
  auto plan = dir.path / "plan.json";
  {
    std::ofstream out(plan);
    out << R"({"cells": [
      {"spec": {"area": {"width": 8, "height": 8}, "tasks_number": 4, "charges_number": 1,
                "agents_number": {"workers": 2, "uavs": 1, "vehicles": 1},
                "online_time": 20, "horizon": 20, "radius": 10, "seed": 3},
       "algorithm": "greedy", "interval": 5, "limit_time": 20, "seeds": [1, 2]},
      {"scenario": "/nonexistent.json", "algorithm": "paln", "seeds": [1]}
    ]})";
  }
  auto table = (dir.path / "plan_results.csv").string();
  REQUIRE(run_cli("experiment --plan " + plan.string() + " --out " + table) == 0);
  auto body = slurp(table);
  CHECK(body.find("spec#3") != std::string::npos);
  // The missing-scenario cell is reported, not fatal.
  CHECK(body.find("error:") != std::string::npos);
}
