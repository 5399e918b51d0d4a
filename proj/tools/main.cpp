// Command-line harness for the uwvsim shared library: scenario generation,
// single runs, experiment plans with per-seed aggregation, and paired
// comparison of result tables. Everything goes through the C API.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "uwvsim.h"

namespace {

using json = nlohmann::ordered_json;

struct ScenarioHandle {
  uwvsim_scenario* p = nullptr;
  ScenarioHandle() = default;
  ScenarioHandle(const ScenarioHandle&) = delete;
  ScenarioHandle& operator=(const ScenarioHandle&) = delete;
  ~ScenarioHandle() { uwvsim_scenario_free(p); }
};

struct ResultHandle {
  uwvsim_result* p = nullptr;
  ResultHandle() = default;
  ResultHandle(const ResultHandle&) = delete;
  ResultHandle& operator=(const ResultHandle&) = delete;
  ~ResultHandle() { uwvsim_result_free(p); }
};

[[noreturn]] void die(const std::string& msg) {
  std::cerr << "error: " << msg << "\n";
  std::exit(1);
}

void check(uwvsim_status st, const std::string& what) {
  if (st != UWVSIM_OK)
    die(what + ": " + uwvsim_status_name(st) + ": " + uwvsim_last_error());
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string hardware_string() {
  std::ifstream in("/proc/cpuinfo");
  std::string line;
  while (std::getline(in, line)) {
    auto pos = line.find("model name");
    if (pos == std::string::npos) continue;
    auto colon = line.find(':');
    if (colon == std::string::npos) break;
    auto name = line.substr(colon + 1);
    auto start = name.find_first_not_of(' ');
    return start == std::string::npos ? name : name.substr(start);
  }
  return "unknown";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) die("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// ---- generate --------------------------------------------------------------

struct GenerateArgs {
  double width = 30, height = 30;
  int tasks = 80, charges = 20, workers = 50, uavs = 30, vehicles = 20;
  double online_time = 60, horizon = 180, radius = 8;
  std::vector<double> task_cost{3.0};
  std::vector<double> charging_power{10.0};
  std::uint64_t seed = 0;
  std::string out;
};

json range_json(const std::vector<double>& v) {
  if (v.size() == 1) return json(v[0]);
  return json::array({v[0], v[1]});
}

int cmd_generate(const GenerateArgs& a) {
  json spec;
  spec["area"] = {{"width", a.width}, {"height", a.height}};
  spec["tasks_number"] = a.tasks;
  spec["charges_number"] = a.charges;
  spec["agents_number"] = {{"workers", a.workers}, {"uavs", a.uavs}, {"vehicles", a.vehicles}};
  spec["online_time"] = a.online_time;
  spec["horizon"] = a.horizon;
  spec["radius"] = a.radius;
  spec["task_cost"] = range_json(a.task_cost);
  spec["charging_power"] = range_json(a.charging_power);
  spec["seed"] = a.seed;

  ScenarioHandle s;
  check(uwvsim_scenario_generate(spec.dump().c_str(), &s.p), "generate");
  check(uwvsim_scenario_save(s.p, a.out.c_str()), "save scenario");
  std::cout << "wrote " << a.out << " (" << a.tasks << " tasks, " << a.charges << " charges, "
            << a.workers << "/" << a.uavs << "/" << a.vehicles
            << " workers/uavs/vehicles, seed " << a.seed << ")\n";
  return 0;
}

// ---- run -------------------------------------------------------------------

struct RunArgs {
  std::string scenario;
  std::string algorithm = "paln";
  double interval = 5, limit_time = 180, tick = 0.1;
  int max_rounds = 200, k1 = 3, k2 = 3;
  std::uint64_t seed = 0;
  std::optional<double> radius;
  bool no_role_partition = false;
  std::string out, trace;
};

json run_config_json(const RunArgs& a) {
  json cfg;
  cfg["algorithm"] = a.algorithm;
  cfg["interval"] = a.interval;
  cfg["limit_time"] = a.limit_time;
  cfg["tick"] = a.tick;
  cfg["max_rounds"] = a.max_rounds;
  cfg["seed"] = a.seed;
  cfg["k1"] = a.k1;
  cfg["k2"] = a.k2;
  if (a.radius) cfg["radius"] = *a.radius;
  cfg["role_partition"] = !a.no_role_partition;
  if (!a.trace.empty()) cfg["trace"] = a.trace;
  return cfg;
}

int cmd_run(const RunArgs& a) {
  ScenarioHandle s;
  check(uwvsim_scenario_load(a.scenario.c_str(), &s.p), "load scenario");
  ResultHandle r;
  check(uwvsim_run(s.p, run_config_json(a).dump().c_str(), &r.p), "run");

  uwvsim_run_summary sum{};
  check(uwvsim_result_summary(r.p, &sum), "summary");
  std::cout << "algorithm " << a.algorithm << ", seed " << a.seed << "\n"
            << "  completed " << sum.tasks_completed << "/" << sum.tasks_total
            << (sum.degenerate ? " (degenerate: no tasks)" : "")
            << ", completion rate " << fmt(sum.completion_rate) << "\n"
            << "  mean decision time " << fmt(sum.mean_decision_seconds) << " s over "
            << sum.epochs << " epochs\n"
            << "  mean agent travel " << fmt(sum.mean_travel_km) << " km, mean coupling "
            << fmt(sum.mean_epsilon) << "\n"
            << "  convergence failures " << sum.convergence_failures << ", audit violations "
            << sum.energy_violations + sum.double_completions + sum.fcfs_violations << "\n";

  if (!a.out.empty()) {
    char* metrics = nullptr;
    check(uwvsim_result_metrics_json(r.p, &metrics), "metrics");
    std::ofstream out(a.out);
    if (!out) die("cannot open " + a.out);
    out << metrics << "\n";
    uwvsim_string_free(metrics);
    std::cout << "metrics written to " << a.out << "\n";
  }
  return 0;
}

// ---- experiment ------------------------------------------------------------

struct Cell {
  std::string label;
  std::string scenario_path;  // or inline spec
  std::optional<json> spec;
  std::string algorithm = "paln";
  double interval = 5, limit_time = 180, tick = 0.1;
  int max_rounds = 200, k1 = 3, k2 = 3;
  std::optional<double> radius;
  bool role_partition = true;
  std::vector<std::uint64_t> seeds{0};
};

struct Row {
  std::string scenario, algorithm, seed;
  double completion = 0, decision = 0, travel = 0, epsilon = 0;
  int failures = 0;
  std::string status = "ok";
};

std::vector<Cell> plan_from_json(const std::string& text) {
  json j = json::parse(text);
  std::vector<Cell> cells;
  for (const auto& c : j.at("cells")) {
    Cell cell;
    if (c.contains("scenario")) {
      cell.scenario_path = c.at("scenario").get<std::string>();
      cell.label = cell.scenario_path;
    } else if (c.contains("spec")) {
      cell.spec = c.at("spec");
      std::uint64_t spec_seed = cell.spec->value("seed", 0);
      cell.label = "spec#" + std::to_string(spec_seed);
    } else {
      die("plan cell needs either 'scenario' or 'spec'");
    }
    cell.algorithm = c.value("algorithm", std::string("paln"));
    cell.interval = c.value("interval", 5.0);
    cell.limit_time = c.value("limit_time", 180.0);
    cell.tick = c.value("tick", 0.1);
    cell.max_rounds = c.value("max_rounds", 200);
    cell.k1 = c.value("k1", 3);
    cell.k2 = c.value("k2", 3);
    if (c.contains("radius")) cell.radius = c.at("radius").get<double>();
    cell.role_partition = c.value("role_partition", true);
    if (c.contains("seeds")) {
      cell.seeds.clear();
      for (const auto& s : c.at("seeds")) cell.seeds.push_back(s.get<std::uint64_t>());
    }
    if (cell.seeds.empty()) die("plan cell has an empty seed list");
    cells.push_back(std::move(cell));
  }
  if (cells.empty()) die("plan has no cells");
  return cells;
}

struct ExperimentArgs {
  std::string plan;
  std::string scenario;
  std::vector<std::string> algorithms{"paln"};
  std::vector<double> intervals{5.0};
  std::vector<double> radii;
  std::vector<std::uint64_t> seeds{0};
  double limit_time = 180;
  int max_rounds = 200, k1 = 3, k2 = 3;
  std::string out = "results.csv";
  std::string runs_dir;
};

std::vector<Cell> plan_from_flags(const ExperimentArgs& a) {
  if (a.scenario.empty()) die("experiment needs --plan or --scenario");
  std::vector<Cell> cells;
  std::vector<std::optional<double>> radii;
  if (a.radii.empty())
    radii.push_back(std::nullopt);
  else
    for (double r : a.radii) radii.push_back(r);
  for (const auto& alg : a.algorithms)
    for (double interval : a.intervals)
      for (const auto& radius : radii) {
        Cell cell;
        cell.scenario_path = a.scenario;
        cell.label = a.scenario;
        cell.algorithm = alg;
        cell.interval = interval;
        cell.limit_time = a.limit_time;
        cell.max_rounds = a.max_rounds;
        cell.k1 = a.k1;
        cell.k2 = a.k2;
        cell.radius = radius;
        cell.seeds = a.seeds;
        cells.push_back(std::move(cell));
      }
  return cells;
}

std::string cell_scenario_label(const Cell& cell) {
  std::string label = cell.label;
  if (cell.radius) label += "@r" + fmt(*cell.radius);
  if (cell.interval != 5.0) label += "@i" + fmt(cell.interval);
  return label;
}

int cmd_experiment(const ExperimentArgs& a) {
  std::vector<Cell> cells =
      a.plan.empty() ? plan_from_flags(a) : plan_from_json(read_file(a.plan));

  if (!a.runs_dir.empty()) std::filesystem::create_directories(a.runs_dir);

  std::vector<Row> rows;
  int cell_idx = 0;
  for (const auto& cell : cells) {
    ScenarioHandle scenario;
    std::string label = cell_scenario_label(cell);
    uwvsim_status st =
        cell.spec ? uwvsim_scenario_generate(cell.spec->dump().c_str(), &scenario.p)
                  : uwvsim_scenario_load(cell.scenario_path.c_str(), &scenario.p);
    if (st != UWVSIM_OK) {
      // Scenario failures poison every seed of the cell but not the plan.
      for (auto seed : cell.seeds) {
        Row row{label, cell.algorithm, std::to_string(seed)};
        row.status = std::string("error: ") + uwvsim_last_error();
        rows.push_back(row);
      }
      ++cell_idx;
      continue;
    }
    for (auto seed : cell.seeds) {
      json cfg;
      cfg["algorithm"] = cell.algorithm;
      cfg["interval"] = cell.interval;
      cfg["limit_time"] = cell.limit_time;
      cfg["tick"] = cell.tick;
      cfg["max_rounds"] = cell.max_rounds;
      cfg["seed"] = seed;
      cfg["k1"] = cell.k1;
      cfg["k2"] = cell.k2;
      if (cell.radius) cfg["radius"] = *cell.radius;
      cfg["role_partition"] = cell.role_partition;

      Row row{label, cell.algorithm, std::to_string(seed)};
      ResultHandle result;
      uwvsim_status run_st = uwvsim_run(scenario.p, cfg.dump().c_str(), &result.p);
      if (run_st != UWVSIM_OK) {
        row.status = std::string("error: ") + uwvsim_last_error();
        rows.push_back(row);
        continue;
      }
      uwvsim_run_summary sum{};
      uwvsim_result_summary(result.p, &sum);
      row.completion = sum.completion_rate;
      row.decision = sum.mean_decision_seconds;
      row.travel = sum.mean_travel_km;
      row.epsilon = sum.mean_epsilon;
      row.failures = sum.convergence_failures;
      rows.push_back(row);

      if (!a.runs_dir.empty()) {
        char* metrics = nullptr;
        if (uwvsim_result_metrics_json(result.p, &metrics) == UWVSIM_OK) {
          auto name = std::filesystem::path(a.runs_dir) /
                      ("cell" + std::to_string(cell_idx) + "_" + cell.algorithm + "_s" +
                       std::to_string(seed) + ".metrics.json");
          std::ofstream mout(name);
          mout << metrics << "\n";
          uwvsim_string_free(metrics);
        }
      }
    }
    ++cell_idx;
  }

  // Aggregate mean/stddev per (scenario, algorithm) over ok rows.
  std::map<std::pair<std::string, std::string>, std::vector<const Row*>> groups;
  for (const auto& r : rows)
    if (r.status == "ok") groups[{r.scenario, r.algorithm}].push_back(&r);

  std::ofstream out(a.out);
  if (!out) die("cannot open " + a.out);
  out << "# uwvsim " << uwvsim_version() << " results\n";
  out << "# hardware: " << hardware_string() << "; cells executed serially\n";
  out << "scenario,algorithm,seed,completion_rate,mean_decision_time_s,mean_travel_km,"
         "mean_epsilon,convergence_failures,status\n";
  auto write_row = [&](const Row& r) {
    out << csv_quote(r.scenario) << ',' << r.algorithm << ',' << r.seed << ','
        << fmt(r.completion) << ',' << fmt(r.decision) << ',' << fmt(r.travel) << ','
        << fmt(r.epsilon) << ',' << r.failures << ',' << csv_quote(r.status) << "\n";
  };
  for (const auto& r : rows) write_row(r);
  for (const auto& [key, members] : groups) {
    auto stat = [&](auto get) {
      double mean = 0;
      for (const Row* r : members) mean += get(*r);
      mean /= members.size();
      double var = 0;
      for (const Row* r : members) var += (get(*r) - mean) * (get(*r) - mean);
      double sd = members.size() > 1 ? std::sqrt(var / (members.size() - 1)) : 0.0;
      return std::make_pair(mean, sd);
    };
    auto [cm, cs] = stat([](const Row& r) { return r.completion; });
    auto [dm, ds] = stat([](const Row& r) { return r.decision; });
    auto [tm, ts] = stat([](const Row& r) { return r.travel; });
    auto [em, es] = stat([](const Row& r) { return r.epsilon; });
    Row mean_row{key.first, key.second, "mean", cm, dm, tm, em, 0, ""};
    Row sd_row{key.first, key.second, "stddev", cs, ds, ts, es, 0, ""};
    write_row(mean_row);
    write_row(sd_row);
  }
  out.close();

  // Run manifest: config, seeds, and code version next to the table.
  json manifest;
  manifest["tool"] = "uwvsim";
  manifest["version"] = uwvsim_version();
  manifest["hardware"] = hardware_string();
  manifest["results"] = a.out;
  manifest["cells"] = json::array();
  for (const auto& cell : cells) {
    json c;
    c["scenario"] = cell.spec ? json(*cell.spec) : json(cell.scenario_path);
    c["algorithm"] = cell.algorithm;
    c["interval"] = cell.interval;
    c["limit_time"] = cell.limit_time;
    c["tick"] = cell.tick;
    c["max_rounds"] = cell.max_rounds;
    c["k1"] = cell.k1;
    c["k2"] = cell.k2;
    if (cell.radius) c["radius"] = *cell.radius;
    c["role_partition"] = cell.role_partition;
    c["seeds"] = cell.seeds;
    manifest["cells"].push_back(std::move(c));
  }
  std::ofstream mout(a.out + ".manifest.json");
  mout << manifest.dump(2) << "\n";

  int errors = 0;
  for (const auto& r : rows)
    if (r.status != "ok") ++errors;
  std::cout << "wrote " << a.out << ": " << rows.size() << " rows, " << errors
            << " failed cells\n";
  return 0;
}

// ---- compare ---------------------------------------------------------------

struct CompareArgs {
  std::string table;
  std::string baseline, candidate;
  std::string out;
};

int cmd_compare(const CompareArgs& a) {
  std::ifstream in(a.table);
  if (!in) die("cannot open " + a.table);
  std::string line;
  std::vector<std::vector<std::string>> data;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    data.push_back(csv_split(line));
  }
  if (data.empty()) die("empty table");
  const auto& header = data.front();
  auto col = [&](const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) die("table lacks column " + name);
    return static_cast<std::size_t>(it - header.begin());
  };
  std::size_t c_scn = col("scenario"), c_alg = col("algorithm"), c_seed = col("seed");
  std::size_t c_cpl = col("completion_rate"), c_dec = col("mean_decision_time_s");
  std::size_t c_trv = col("mean_travel_km"), c_status = col("status");

  struct Entry {
    double completion, decision, travel;
  };
  std::map<std::pair<std::string, std::string>, Entry> base, cand;
  for (std::size_t i = 1; i < data.size(); ++i) {
    const auto& row = data[i];
    if (row.size() < header.size()) continue;
    if (row[c_seed] == "mean" || row[c_seed] == "stddev") continue;
    if (row[c_status] != "ok") continue;
    Entry e{std::stod(row[c_cpl]), std::stod(row[c_dec]), std::stod(row[c_trv])};
    auto key = std::make_pair(row[c_scn], row[c_seed]);
    if (row[c_alg] == a.baseline) base[key] = e;
    if (row[c_alg] == a.candidate) cand[key] = e;
  }
  if (base.empty()) die("no rows for baseline " + a.baseline);
  if (cand.empty()) die("no rows for candidate " + a.candidate);

  std::set<std::pair<std::string, std::string>> base_keys, cand_keys;
  for (const auto& [k, v] : base) base_keys.insert(k);
  for (const auto& [k, v] : cand) cand_keys.insert(k);
  if (base_keys != cand_keys) {
    std::cerr << "error: unpaired cells between " << a.baseline << " and " << a.candidate
              << "\n";
    for (const auto& k : base_keys)
      if (!cand_keys.contains(k))
        std::cerr << "  only " << a.baseline << ": " << k.first << " seed " << k.second << "\n";
    for (const auto& k : cand_keys)
      if (!base_keys.contains(k))
        std::cerr << "  only " << a.candidate << ": " << k.first << " seed " << k.second << "\n";
    return 1;
  }

  std::ofstream pairs_out;
  if (!a.out.empty()) {
    pairs_out.open(a.out);
    if (!pairs_out) die("cannot open " + a.out);
    pairs_out << "scenario,seed,completion_delta_pp,decision_time_ratio,travel_ratio\n";
  }
  double sum_delta = 0, sum_dec_ratio = 0, sum_trv_ratio = 0;
  int n = 0, dec_ratios = 0, trv_ratios = 0;
  for (const auto& [key, b] : base) {
    const Entry& c = cand.at(key);
    double delta_pp = (c.completion - b.completion) * 100.0;
    sum_delta += delta_pp;
    ++n;
    double dec_ratio = b.decision > 0 ? c.decision / b.decision : 0.0;
    double trv_ratio = b.travel > 0 ? c.travel / b.travel : 0.0;
    if (b.decision > 0) {
      sum_dec_ratio += dec_ratio;
      ++dec_ratios;
    }
    if (b.travel > 0) {
      sum_trv_ratio += trv_ratio;
      ++trv_ratios;
    }
    if (pairs_out.is_open())
      pairs_out << csv_quote(key.first) << ',' << key.second << ',' << fmt(delta_pp) << ','
                << fmt(dec_ratio) << ',' << fmt(trv_ratio) << "\n";
  }
  std::cout << a.candidate << " vs " << a.baseline << " over " << n << " paired cells\n"
            << "  completion delta: " << fmt(sum_delta / n) << " pp (mean)\n";
  if (dec_ratios > 0)
    std::cout << "  decision time ratio: " << fmt(sum_dec_ratio / dec_ratios) << " (mean)\n";
  if (trv_ratios > 0)
    std::cout << "  travel ratio: " << fmt(sum_trv_ratio / trv_ratios) << " (mean)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"uwvsim: time-dependent UAV/worker/vehicle crowdsensing scheduling simulator"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "generate a random scenario file");
  generate->add_option("--width", gen.width, "area width, km");
  generate->add_option("--height", gen.height, "area height, km");
  generate->add_option("--tasks", gen.tasks, "number of task points");
  generate->add_option("--charges", gen.charges, "number of charge points");
  generate->add_option("--workers", gen.workers, "number of workers");
  generate->add_option("--uavs", gen.uavs, "number of UAVs");
  generate->add_option("--vehicles", gen.vehicles, "number of vehicles");
  generate->add_option("--online-time", gen.online_time, "per-agent online window, min");
  generate->add_option("--horizon", gen.horizon, "window phases drawn in [0, horizon-online]");
  generate->add_option("--radius", gen.radius, "communication radius, km");
  generate->add_option("--task-cost", gen.task_cost, "task cost, fixed or lo hi")
      ->expected(1, 2);
  generate->add_option("--charge-power", gen.charging_power, "charging power, fixed or lo hi")
      ->expected(1, 2);
  generate->add_option("--seed", gen.seed, "generation seed");
  generate->add_option("--out", gen.out, "output scenario path")->required();

  RunArgs runa;
  auto* runc = app.add_subcommand("run", "run one simulation");
  runc->add_option("--scenario", runa.scenario, "scenario file")->required();
  runc->add_option("--algorithm", runa.algorithm, "paln|raln|greedy|kwta")
      ->check(CLI::IsMember({"paln", "raln", "greedy", "kwta"}));
  runc->add_option("--interval", runa.interval, "decision interval, min");
  runc->add_option("--limit-time", runa.limit_time, "simulation horizon, min");
  runc->add_option("--tick", runa.tick, "movement step, min");
  runc->add_option("--max-rounds", runa.max_rounds, "local-Nash round cap");
  runc->add_option("--k1", runa.k1, "kwta UAV-side retention");
  runc->add_option("--k2", runa.k2, "kwta partner-side retention");
  runc->add_option("--seed", runa.seed, "run seed");
  double radius_val = 0;
  auto* radius_opt = runc->add_option("--radius", radius_val, "override every agent's radius");
  runc->add_flag("--no-role-partition", runa.no_role_partition,
                 "skip the benefit-based role split (timing ablation)");
  runc->add_option("--out", runa.out, "write the metrics log as JSON");
  runc->add_option("--trace", runa.trace, "write a per-tick JSONL trace");

  ExperimentArgs exp;
  auto* expc = app.add_subcommand("experiment", "run a plan of cells and tabulate results");
  expc->add_option("--plan", exp.plan, "plan JSON file (see README)");
  expc->add_option("--scenario", exp.scenario, "scenario file for flag-built plans");
  expc->add_option("--algorithms", exp.algorithms, "algorithms to sweep")->delimiter(',');
  expc->add_option("--intervals", exp.intervals, "decision intervals to sweep")->delimiter(',');
  expc->add_option("--radii", exp.radii, "radius overrides to sweep")->delimiter(',');
  expc->add_option("--seeds", exp.seeds, "seeds per cell")->delimiter(',');
  expc->add_option("--limit-time", exp.limit_time, "simulation horizon, min");
  expc->add_option("--max-rounds", exp.max_rounds, "local-Nash round cap");
  expc->add_option("--k1", exp.k1, "kwta UAV-side retention");
  expc->add_option("--k2", exp.k2, "kwta partner-side retention");
  expc->add_option("--out", exp.out, "result table CSV path");
  expc->add_option("--runs-dir", exp.runs_dir, "directory for per-run metrics JSON");

  CompareArgs cmp;
  auto* cmpc = app.add_subcommand("compare", "paired deltas between two algorithms");
  cmpc->add_option("--table", cmp.table, "results CSV from 'experiment'")->required();
  cmpc->add_option("--baseline", cmp.baseline, "baseline algorithm")->required();
  cmpc->add_option("--candidate", cmp.candidate, "candidate algorithm")->required();
  cmpc->add_option("--out", cmp.out, "write per-pair deltas CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (generate->parsed()) return cmd_generate(gen);
    if (runc->parsed()) {
      if (radius_opt->count() > 0) runa.radius = radius_val;
      return cmd_run(runa);
    }
    if (expc->parsed()) return cmd_experiment(exp);
    if (cmpc->parsed()) return cmd_compare(cmp);
  } catch (const std::exception& e) {
    die(e.what());
  }
  return 1;
}
