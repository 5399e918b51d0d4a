#include "uwvsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "uwvsim/errors.hpp"
#include "uwvsim/random.hpp"

namespace uwv {

using json = nlohmann::ordered_json;

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConstraintError(msg);
}

void check_finite(double v, const std::string& what) {
  require(std::isfinite(v), what + " must be finite");
}

void check_position(Position p, double w, double h, const std::string& who) {
  check_finite(p.x, who + ": x");
  check_finite(p.y, who + ": y");
  require(p.x >= 0.0 && p.x <= w && p.y >= 0.0 && p.y <= h,
          who + ": position (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
              ") outside scenario bounds");
}

void check_window(const OnlineWindow& win, const std::string& who) {
  check_finite(win.uptime, who + ": uptime");
  check_finite(win.downtime, who + ": downtime");
  require(win.uptime >= 0.0, who + ": uptime must be non-negative");
  require(win.uptime < win.downtime, who + ": window must satisfy uptime < downtime");
}

template <class T>
void check_unique_ids(const std::vector<T>& v, const std::string& what) {
  std::set<int> seen;
  for (const auto& e : v)
    require(seen.insert(e.id).second, what + " " + std::to_string(e.id) + ": duplicate id");
}

double jnum(const json& j, const std::string& path) {
  if (!j.is_number()) throw ParseError(path + ": expected a number");
  return j.get<double>();
}

int jint(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ParseError(path + ": expected an integer");
  return j.get<int>();
}

const json& jfield(const json& j, const char* key, const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(path + ": missing field '" + key + "'");
  return *it;
}

Position jposition(const json& j, const std::string& path) {
  if (!j.is_object()) throw ParseError(path + ": expected an object");
  return {jnum(jfield(j, "x", path), path + ".x"), jnum(jfield(j, "y", path), path + ".y")};
}

OnlineWindow jwindow(const json& j, const std::string& path) {
  if (!j.is_object()) throw ParseError(path + ": expected an object");
  return {jnum(jfield(j, "uptime", path), path + ".uptime"),
          jnum(jfield(j, "downtime", path), path + ".downtime")};
}

json position_to_json(Position p) { return json{{"x", p.x}, {"y", p.y}}; }
json window_to_json(const OnlineWindow& w) {
  return json{{"uptime", w.uptime}, {"downtime", w.downtime}};
}

ValueRange jrange(const json& j, const std::string& path) {
  if (j.is_number()) {
    double v = j.get<double>();
    return {v, v};
  }
  if (j.is_array() && j.size() == 2)
    return {jnum(j[0], path + "[0]"), jnum(j[1], path + "[1]")};
  throw ParseError(path + ": expected a number or a [lo, hi] pair");
}

json range_to_json(const ValueRange& r) {
  if (r.lo == r.hi) return json(r.lo);
  return json::array({r.lo, r.hi});
}

}  // namespace

void validate(const ScenarioSpec& spec) {
  require(spec.width >= 1.0 && spec.height >= 1.0, "spec: area must be at least 1x1 km");
  require(spec.tasks >= 0 && spec.charges >= 0 && spec.workers >= 0 && spec.uavs >= 0 &&
              spec.vehicles >= 0,
          "spec: entity counts must be non-negative");
  require(!(spec.uavs > 0 && spec.charges == 0),
          "spec: UAVs require at least one charge point");
  require(spec.online_time > 0.0, "spec: online_time must be positive");
  require(spec.horizon > 0.0, "spec: horizon must be positive");
  require(spec.task_cost.lo > 0.0 && spec.task_cost.lo <= spec.task_cost.hi,
          "spec: task_cost range must be positive and ordered");
  require(spec.charging_power.lo > 0.0 && spec.charging_power.lo <= spec.charging_power.hi,
          "spec: charging_power range must be positive and ordered");
  require(spec.radius > 0.0, "spec: radius must be positive");
  require(spec.uav_speed > 0.0 && spec.worker_speed > 0.0 && spec.vehicle_speed > 0.0,
          "spec: speeds must be positive");
  require(spec.uav_full_power > 0.0, "spec: uav_full_power must be positive");
  require(spec.uav_initial_power >= 0.0 && spec.uav_initial_power <= spec.uav_full_power,
          "spec: uav_initial_power must lie in [0, uav_full_power]");
}

void validate(const Scenario& s) {
  require(s.width > 0.0 && s.height > 0.0, "scenario: bounds must be positive");
  require(!(s.uavs.size() > 0 && s.charges.empty()),
          "scenario: UAVs require at least one charge point");
  check_unique_ids(s.uavs, "uav");
  check_unique_ids(s.workers, "worker");
  check_unique_ids(s.vehicles, "vehicle");
  check_unique_ids(s.tasks, "task");
  check_unique_ids(s.charges, "charge");
  for (const auto& u : s.uavs) {
    std::string who = "uav " + std::to_string(u.id);
    check_position(u.loc, s.width, s.height, who);
    check_window(u.window, who);
    require(u.speed > 0.0, who + ": speed must be positive");
    require(u.radius > 0.0, who + ": radius must be positive");
    require(u.full_power > 0.0, who + ": full_power must be positive");
    require(u.power >= 0.0 && u.power <= u.full_power,
            who + ": power must lie in [0, full_power]");
  }
  for (const auto& w : s.workers) {
    std::string who = "worker " + std::to_string(w.id);
    check_position(w.loc, s.width, s.height, who);
    check_window(w.window, who);
    require(w.speed > 0.0, who + ": speed must be positive");
    require(w.radius > 0.0, who + ": radius must be positive");
  }
  for (const auto& v : s.vehicles) {
    std::string who = "vehicle " + std::to_string(v.id);
    check_position(v.loc, s.width, s.height, who);
    check_window(v.window, who);
    require(v.speed > 0.0, who + ": speed must be positive");
    require(v.radius > 0.0, who + ": radius must be positive");
    require(v.charge_power > 0.0, who + ": charge_power must be positive");
  }
  for (const auto& t : s.tasks) {
    std::string who = "task " + std::to_string(t.id);
    check_position(t.loc, s.width, s.height, who);
    require(t.cost_power > 0.0, who + ": cost_power must be positive");
  }
  for (const auto& c : s.charges)
    check_position(c.loc, s.width, s.height, "charge " + std::to_string(c.id));
}

Scenario generate(const ScenarioSpec& spec) {
  validate(spec);
  std::mt19937_64 rng(spec.seed);
  auto draw_pos = [&] {
    return Position{uniform(rng, 0.0, spec.width), uniform(rng, 0.0, spec.height)};
  };
  auto draw_window = [&] {
    double span = std::max(0.0, spec.horizon - spec.online_time);
    double up = uniform(rng, 0.0, span);
    return OnlineWindow{up, up + spec.online_time};
  };

  Scenario s;
  s.spec = spec;
  s.width = spec.width;
  s.height = spec.height;
  for (int i = 0; i < spec.tasks; ++i) {
    TaskPoint t{i, draw_pos(), uniform(rng, spec.task_cost.lo, spec.task_cost.hi)};
    s.tasks.push_back(t);
  }
  for (int i = 0; i < spec.charges; ++i) s.charges.push_back({i, draw_pos()});
  for (int i = 0; i < spec.workers; ++i)
    s.workers.push_back({i, draw_pos(), spec.worker_speed, spec.radius, draw_window()});
  for (int i = 0; i < spec.uavs; ++i)
    s.uavs.push_back({i, draw_pos(), spec.uav_speed, spec.uav_full_power,
                      spec.uav_initial_power, spec.radius, draw_window()});
  for (int i = 0; i < spec.vehicles; ++i)
    s.vehicles.push_back({i, draw_pos(), spec.vehicle_speed, spec.radius,
                          uniform(rng, spec.charging_power.lo, spec.charging_power.hi),
                          draw_window()});
  validate(s);
  return s;
}

std::string spec_to_json(const ScenarioSpec& spec) {
  json j;
  j["area"] = {{"width", spec.width}, {"height", spec.height}};
  j["tasks_number"] = spec.tasks;
  j["charges_number"] = spec.charges;
  j["agents_number"] = {
      {"workers", spec.workers}, {"uavs", spec.uavs}, {"vehicles", spec.vehicles}};
  j["online_time"] = spec.online_time;
  j["horizon"] = spec.horizon;
  j["task_cost"] = range_to_json(spec.task_cost);
  j["charging_power"] = range_to_json(spec.charging_power);
  j["radius"] = spec.radius;
  j["uav_speed"] = spec.uav_speed;
  j["worker_speed"] = spec.worker_speed;
  j["vehicle_speed"] = spec.vehicle_speed;
  j["uav_full_power"] = spec.uav_full_power;
  j["uav_initial_power"] = spec.uav_initial_power;
  j["seed"] = spec.seed;
  return j.dump(2);
}

namespace {

ScenarioSpec spec_from_json_value(const json& j) {
  if (!j.is_object()) throw ParseError("spec: expected an object");
  ScenarioSpec spec;
  if (auto it = j.find("area"); it != j.end()) {
    spec.width = jnum(jfield(*it, "width", "spec.area"), "spec.area.width");
    spec.height = jnum(jfield(*it, "height", "spec.area"), "spec.area.height");
  }
  if (auto it = j.find("tasks_number"); it != j.end()) spec.tasks = jint(*it, "spec.tasks_number");
  if (auto it = j.find("charges_number"); it != j.end())
    spec.charges = jint(*it, "spec.charges_number");
  if (auto it = j.find("agents_number"); it != j.end()) {
    spec.workers = jint(jfield(*it, "workers", "spec.agents_number"), "spec.agents_number.workers");
    spec.uavs = jint(jfield(*it, "uavs", "spec.agents_number"), "spec.agents_number.uavs");
    spec.vehicles =
        jint(jfield(*it, "vehicles", "spec.agents_number"), "spec.agents_number.vehicles");
  }
  if (auto it = j.find("online_time"); it != j.end())
    spec.online_time = jnum(*it, "spec.online_time");
  if (auto it = j.find("horizon"); it != j.end()) spec.horizon = jnum(*it, "spec.horizon");
  if (auto it = j.find("task_cost"); it != j.end()) spec.task_cost = jrange(*it, "spec.task_cost");
  if (auto it = j.find("charging_power"); it != j.end())
    spec.charging_power = jrange(*it, "spec.charging_power");
  if (auto it = j.find("radius"); it != j.end()) spec.radius = jnum(*it, "spec.radius");
  if (auto it = j.find("uav_speed"); it != j.end()) spec.uav_speed = jnum(*it, "spec.uav_speed");
  if (auto it = j.find("worker_speed"); it != j.end())
    spec.worker_speed = jnum(*it, "spec.worker_speed");
  if (auto it = j.find("vehicle_speed"); it != j.end())
    spec.vehicle_speed = jnum(*it, "spec.vehicle_speed");
  if (auto it = j.find("uav_full_power"); it != j.end())
    spec.uav_full_power = jnum(*it, "spec.uav_full_power");
  if (auto it = j.find("uav_initial_power"); it != j.end())
    spec.uav_initial_power = jnum(*it, "spec.uav_initial_power");
  if (auto it = j.find("seed"); it != j.end()) {
    if (!it->is_number_unsigned() && !it->is_number_integer())
      throw ParseError("spec.seed: expected an integer");
    spec.seed = it->get<std::uint64_t>();
  }
  validate(spec);
  return spec;
}

}  // namespace

ScenarioSpec spec_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("spec: ") + e.what());
  }
  return spec_from_json_value(j);
}

std::string scenario_to_json(const Scenario& s) {
  json j;
  j["version"] = s.version;
  if (s.spec) j["spec"] = json::parse(spec_to_json(*s.spec));
  j["bounds"] = {{"width", s.width}, {"height", s.height}};
  j["uavs"] = json::array();
  for (const auto& u : s.uavs)
    j["uavs"].push_back({{"id", u.id},
                         {"loc", position_to_json(u.loc)},
                         {"speed", u.speed},
                         {"full_power", u.full_power},
                         {"power", u.power},
                         {"radius", u.radius},
                         {"window", window_to_json(u.window)}});
  j["workers"] = json::array();
  for (const auto& w : s.workers)
    j["workers"].push_back({{"id", w.id},
                            {"loc", position_to_json(w.loc)},
                            {"speed", w.speed},
                            {"radius", w.radius},
                            {"window", window_to_json(w.window)}});
  j["vehicles"] = json::array();
  for (const auto& v : s.vehicles)
    j["vehicles"].push_back({{"id", v.id},
                             {"loc", position_to_json(v.loc)},
                             {"speed", v.speed},
                             {"radius", v.radius},
                             {"charge_power", v.charge_power},
                             {"window", window_to_json(v.window)}});
  j["tasks"] = json::array();
  for (const auto& t : s.tasks)
    j["tasks"].push_back(
        {{"id", t.id}, {"loc", position_to_json(t.loc)}, {"cost_power", t.cost_power}});
  j["charges"] = json::array();
  for (const auto& c : s.charges)
    j["charges"].push_back({{"id", c.id}, {"loc", position_to_json(c.loc)}});
  return j.dump(2);
}

Scenario scenario_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("scenario: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("scenario: expected an object");

  Scenario s;
  s.version = jint(jfield(j, "version", "scenario"), "scenario.version");
  if (s.version != 1)
    throw ParseError("scenario: unsupported version " + std::to_string(s.version));
  if (auto it = j.find("spec"); it != j.end() && !it->is_null())
    s.spec = spec_from_json_value(*it);
  const json& bounds = jfield(j, "bounds", "scenario");
  s.width = jnum(jfield(bounds, "width", "scenario.bounds"), "scenario.bounds.width");
  s.height = jnum(jfield(bounds, "height", "scenario.bounds"), "scenario.bounds.height");

  auto arr = [&](const char* key) -> const json& {
    const json& a = jfield(j, key, "scenario");
    if (!a.is_array()) throw ParseError(std::string("scenario.") + key + ": expected an array");
    return a;
  };
  std::size_t i = 0;
  for (const auto& e : arr("uavs")) {
    std::string p = "scenario.uavs[" + std::to_string(i++) + "]";
    s.uavs.push_back({jint(jfield(e, "id", p), p + ".id"),
                      jposition(jfield(e, "loc", p), p + ".loc"),
                      jnum(jfield(e, "speed", p), p + ".speed"),
                      jnum(jfield(e, "full_power", p), p + ".full_power"),
                      jnum(jfield(e, "power", p), p + ".power"),
                      jnum(jfield(e, "radius", p), p + ".radius"),
                      jwindow(jfield(e, "window", p), p + ".window")});
  }
  i = 0;
  for (const auto& e : arr("workers")) {
    std::string p = "scenario.workers[" + std::to_string(i++) + "]";
    s.workers.push_back({jint(jfield(e, "id", p), p + ".id"),
                         jposition(jfield(e, "loc", p), p + ".loc"),
                         jnum(jfield(e, "speed", p), p + ".speed"),
                         jnum(jfield(e, "radius", p), p + ".radius"),
                         jwindow(jfield(e, "window", p), p + ".window")});
  }
  i = 0;
  for (const auto& e : arr("vehicles")) {
    std::string p = "scenario.vehicles[" + std::to_string(i++) + "]";
    s.vehicles.push_back({jint(jfield(e, "id", p), p + ".id"),
                          jposition(jfield(e, "loc", p), p + ".loc"),
                          jnum(jfield(e, "speed", p), p + ".speed"),
                          jnum(jfield(e, "radius", p), p + ".radius"),
                          jnum(jfield(e, "charge_power", p), p + ".charge_power"),
                          jwindow(jfield(e, "window", p), p + ".window")});
  }
  i = 0;
  for (const auto& e : arr("tasks")) {
    std::string p = "scenario.tasks[" + std::to_string(i++) + "]";
    s.tasks.push_back({jint(jfield(e, "id", p), p + ".id"),
                       jposition(jfield(e, "loc", p), p + ".loc"),
                       jnum(jfield(e, "cost_power", p), p + ".cost_power"), false});
  }
  i = 0;
  for (const auto& e : arr("charges")) {
    std::string p = "scenario.charges[" + std::to_string(i++) + "]";
    s.charges.push_back({jint(jfield(e, "id", p), p + ".id"),
                         jposition(jfield(e, "loc", p), p + ".loc")});
  }

  auto by_id = [](const auto& a, const auto& b) { return a.id < b.id; };
  std::sort(s.uavs.begin(), s.uavs.end(), by_id);
  std::sort(s.workers.begin(), s.workers.end(), by_id);
  std::sort(s.vehicles.begin(), s.vehicles.end(), by_id);
  std::sort(s.tasks.begin(), s.tasks.end(), by_id);
  std::sort(s.charges.begin(), s.charges.end(), by_id);
  validate(s);
  return s;
}

void save_scenario(const Scenario& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << scenario_to_json(s) << '\n';
  if (!out) throw IoError("write to " + path + " failed");
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return scenario_from_json(buf.str());
}

WorldSnapshot snapshot_of(const Scenario& s, double sys_time) {
  WorldSnapshot snap;
  snap.sys_time = sys_time;
  snap.width = s.width;
  snap.height = s.height;
  snap.uavs = online_at(s.uavs, sys_time);
  snap.workers = online_at(s.workers, sys_time);
  snap.vehicles = online_at(s.vehicles, sys_time);
  for (const auto& t : s.tasks)
    if (!t.completed) snap.open_tasks.push_back(t);
  snap.charge_points = s.charges;
  return snap;
}

}  // namespace uwv
