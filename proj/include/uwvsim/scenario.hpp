#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "uwvsim/world.hpp"

namespace uwv {

// Closed interval for drawn attributes; lo == hi pins the value.
struct ValueRange {
  double lo = 0.0;
  double hi = 0.0;
  bool operator==(const ValueRange&) const = default;
};

// Parameters of a randomly generated scenario. Defaults reproduce the
// standard 30x30 configuration: 80 tasks, 20 charge points, 60 min online
// windows, 50 workers / 30 UAVs / 20 vehicles, task cost 3, charging
// power 10.
struct ScenarioSpec {
  double width = 30.0;   // km
  double height = 30.0;  // km
  int tasks = 80;
  int charges = 20;
  int workers = 50;
  int uavs = 30;
  int vehicles = 20;
  double online_time = 60.0;  // window duration per agent, min
  double horizon = 180.0;     // window phases are drawn in [0, horizon - online_time]
  ValueRange task_cost{3.0, 3.0};
  ValueRange charging_power{10.0, 10.0};
  double radius = 8.0;
  double uav_speed = 1.0;
  double worker_speed = 0.5;
  double vehicle_speed = 0.8;
  double uav_full_power = 30.0;
  double uav_initial_power = 30.0;
  std::uint64_t seed = 0;
};

// Fully materialized scenario: the initial world state plus the generating
// spec when one exists. Entity lists are sorted by id.
struct Scenario {
  int version = 1;
  std::optional<ScenarioSpec> spec;
  double width = 0.0;
  double height = 0.0;
  std::vector<Uav> uavs;
  std::vector<Worker> workers;
  std::vector<Vehicle> vehicles;
  std::vector<TaskPoint> tasks;
  std::vector<ChargePoint> charges;
};

// Throws ConstraintError naming the violated invariant and entity.
void validate(const ScenarioSpec& spec);
void validate(const Scenario& scenario);

// Uniform continuous placement over the area, deterministic per seed.
Scenario generate(const ScenarioSpec& spec);

// JSON round trips are lossless; load/from_json validate every world
// invariant and reject violations with field-level diagnostics.
std::string scenario_to_json(const Scenario& scenario);
Scenario scenario_from_json(const std::string& json);
std::string spec_to_json(const ScenarioSpec& spec);
ScenarioSpec spec_from_json(const std::string& json);

void save_scenario(const Scenario& scenario, const std::string& path);
Scenario load_scenario(const std::string& path);

// View of the initial scenario state at a given time: online agents and
// open tasks only.
WorldSnapshot snapshot_of(const Scenario& scenario, double sys_time);

}  // namespace uwv
