#pragma once

#include <cmath>
#include <compare>
#include <optional>
#include <span>
#include <string>
#include <vector>

// Domain model for UAV/worker/vehicle crowdsensing scenarios.
// Units throughout: distances in km, times in minutes, speeds in km/min.
// UAV energy is expressed as remaining flight range in km.

namespace uwv {

struct Position {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Position&) const = default;
};

inline double dis(Position a, Position b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

// Half-open availability window [uptime, downtime).
struct OnlineWindow {
  double uptime = 0.0;
  double downtime = 0.0;
  bool covers(double t) const { return uptime <= t && t < downtime; }
  double length() const { return downtime - uptime; }
};

struct Uav {
  int id = 0;
  Position loc;
  double speed = 1.0;
  double full_power = 30.0;  // max flight range when fully charged, km
  double power = 30.0;       // remaining flight range, km
  double radius = 8.0;       // communication range, km
  OnlineWindow window;
};

struct Worker {
  int id = 0;
  Position loc;
  double speed = 0.5;
  double radius = 8.0;
  OnlineWindow window;
};

struct Vehicle {
  int id = 0;
  Position loc;
  double speed = 0.8;
  double radius = 8.0;
  double charge_power = 10.0;  // km of UAV range restored per minute
  OnlineWindow window;
};

struct TaskPoint {
  int id = 0;
  Position loc;
  double cost_power = 3.0;  // km of UAV range consumed by executing the task
  bool completed = false;
};

struct ChargePoint {
  int id = 0;
  Position loc;
};

enum class AgentKind { Uav, Worker, Vehicle };

struct AgentRef {
  AgentKind kind = AgentKind::Uav;
  int id = 0;
  auto operator<=>(const AgentRef&) const = default;
};

std::string to_string(AgentRef a);

// Immutable per-epoch view of the world. Contains only agents whose online
// window covers sys_time and only tasks that are still open. Entity lists
// are sorted by id.
struct WorldSnapshot {
  double sys_time = 0.0;
  double width = 0.0;
  double height = 0.0;
  std::vector<Uav> uavs;
  std::vector<Worker> workers;
  std::vector<Vehicle> vehicles;
  std::vector<TaskPoint> open_tasks;
  std::vector<ChargePoint> charge_points;

  const Uav* find_uav(int id) const;
  const Worker* find_worker(int id) const;
  const Vehicle* find_vehicle(int id) const;
  const TaskPoint* find_task(int id) const;
  const ChargePoint* find_charge(int id) const;
  std::optional<Position> agent_position(AgentRef a) const;
};

// Range checks are inclusive at the boundary.
template <class A>
bool in_range(const A& observer, Position point) {
  return dis(observer.loc, point) <= observer.radius;
}

// Distance from `from` to the closest charge point over the whole set.
// Throws std::invalid_argument when the set is empty: a scenario with UAVs
// but no charge points is invalid.
double nearest_charge_distance(Position from, std::span<const ChargePoint> cps);

// The UAV can reach the charge point on its remaining range.
bool feasible_charge(const Uav& uav, const ChargePoint& cp);

// The UAV can reach the task, execute it, and still reach the charge point
// nearest to the task.
bool feasible_task(const Uav& uav, const TaskPoint& task,
                   std::span<const ChargePoint> all_charge_points);

template <class A>
std::vector<A> online_at(const std::vector<A>& agents, double t) {
  std::vector<A> out;
  for (const auto& a : agents)
    if (a.window.covers(t)) out.push_back(a);
  return out;
}

}  // namespace uwv
