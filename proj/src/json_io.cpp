#include <cmath>

#include "json.hpp"
#include "uwvsim/errors.hpp"
#include "uwvsim/simkernel.hpp"

// JSON forms of the run config and the metrics log. Field names are part of
// the tool's compatibility surface and are documented in the README.

namespace uwv {

using json = nlohmann::ordered_json;

std::string sim_config_to_json(const SimConfig& cfg) {
  json j;
  j["algorithm"] = to_string(cfg.algorithm);
  j["interval"] = cfg.interval;
  j["limit_time"] = cfg.limit_time;
  j["tick"] = cfg.tick;
  j["max_rounds"] = cfg.max_rounds;
  j["seed"] = cfg.seed;
  j["k1"] = cfg.kwta.k1;
  j["k2"] = cfg.kwta.k2;
  if (cfg.radius_override) j["radius"] = *cfg.radius_override;
  j["role_partition"] = cfg.role_partition;
  if (!cfg.trace_path.empty()) j["trace"] = cfg.trace_path;
  return j.dump(2);
}

SimConfig sim_config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("config: expected an object");

  SimConfig cfg;
  auto num = [&](const char* key, double& out) {
    if (auto it = j.find(key); it != j.end()) {
      if (!it->is_number()) throw ParseError(std::string("config.") + key + ": expected a number");
      out = it->get<double>();
    }
  };
  auto integer = [&](const char* key, int& out) {
    if (auto it = j.find(key); it != j.end()) {
      if (!it->is_number_integer())
        throw ParseError(std::string("config.") + key + ": expected an integer");
      out = it->get<int>();
    }
  };
  if (auto it = j.find("algorithm"); it != j.end()) {
    if (!it->is_string()) throw ParseError("config.algorithm: expected a string");
    cfg.algorithm = algorithm_from_string(it->get<std::string>());
  }
  num("interval", cfg.interval);
  num("limit_time", cfg.limit_time);
  num("tick", cfg.tick);
  integer("max_rounds", cfg.max_rounds);
  if (auto it = j.find("seed"); it != j.end()) {
    if (!it->is_number_integer() && !it->is_number_unsigned())
      throw ParseError("config.seed: expected an integer");
    cfg.seed = it->get<std::uint64_t>();
  }
  integer("k1", cfg.kwta.k1);
  integer("k2", cfg.kwta.k2);
  if (auto it = j.find("radius"); it != j.end()) {
    if (!it->is_number()) throw ParseError("config.radius: expected a number");
    cfg.radius_override = it->get<double>();
  }
  if (auto it = j.find("role_partition"); it != j.end()) {
    if (!it->is_boolean()) throw ParseError("config.role_partition: expected a boolean");
    cfg.role_partition = it->get<bool>();
  }
  if (auto it = j.find("trace"); it != j.end()) {
    if (!it->is_string()) throw ParseError("config.trace: expected a string");
    cfg.trace_path = it->get<std::string>();
  }
  validate(cfg);
  return cfg;
}

std::string metrics_to_json(const MetricsLog& log) {
  json j;
  j["tasks_total"] = log.tasks_total;
  j["completed_tasks"] = log.completed_tasks;
  j["degenerate"] = log.degenerate;
  j["completion_rate"] = log.completion_rate;
  j["agents_total"] = log.agents_total;
  j["total_travel_km"] = log.total_travel_km;
  j["mean_travel_km"] = log.mean_travel_km;
  j["mean_decision_seconds"] = log.mean_decision_seconds;
  j["mean_epsilon"] = log.mean_epsilon;
  j["convergence_failures"] = log.convergence_failures;
  j["energy_violations"] = log.energy_violations;
  j["double_completions"] = log.double_completions;
  j["fcfs_violations"] = log.fcfs_violations;
  j["feasibility_violations"] = log.feasibility_violations;

  j["epochs"] = json::array();
  for (const auto& r : log.epochs) {
    json e;
    e["epoch"] = r.epoch;
    e["sys_time"] = r.sys_time;
    e["decision_seconds"] = r.decision_seconds;
    e["online_agents"] = r.online_agents;
    e["task_matches"] = r.task_matches;
    e["charge_matches"] = r.charge_matches;
    e["completed_in_epoch"] = r.completed_in_epoch;
    e["completed_total"] = r.completed_total;
    e["epsilon"] = r.epsilon ? json(*r.epsilon) : json(nullptr);
    e["gap"] = {{"sum_reward", r.gap.sum_reward},
                {"global_completed", r.gap.global_completed},
                {"task_side_agents", r.gap.task_side_agents},
                {"alpha_hat", r.gap.alpha_hat ? json(*r.gap.alpha_hat) : json(nullptr)},
                {"gap", r.gap.gap}};
    e["rounds_used"] = r.rounds_used;
    e["converged"] = r.converged;
    e["fallback_count"] = r.fallback_count;
    j["epochs"].push_back(std::move(e));
  }

  j["completions"] = json::array();
  for (const auto& c : log.completions)
    j["completions"].push_back({{"task", c.task_id}, {"t", c.time}, {"epoch", c.epoch}});
  return j.dump(2);
}

}  // namespace uwv
