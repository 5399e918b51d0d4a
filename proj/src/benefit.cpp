#include "uwvsim/benefit.hpp"

#include <algorithm>
#include <limits>

namespace uwv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

std::optional<TaskBenefit> estimate_task_benefit(const Uav& uav, const WorldSnapshot& snap) {
  // Nearest feasible open task in communication range; distance ties go to
  // the lower id, which is the iteration order of the snapshot.
  const TaskPoint* task = nullptr;
  double task_d = kInf;
  for (const auto& t : snap.open_tasks) {
    if (!in_range(uav, t.loc)) continue;
    if (!feasible_task(uav, t, snap.charge_points)) continue;
    double d = dis(uav.loc, t.loc);
    if (d < task_d) {
      task_d = d;
      task = &t;
    }
  }
  if (!task) return std::nullopt;

  // In-range worker closest to that task.
  const Worker* worker = nullptr;
  double worker_d = kInf;
  for (const auto& w : snap.workers) {
    if (!in_range(uav, w.loc)) continue;
    double d = dis(task->loc, w.loc);
    if (d < worker_d) {
      worker_d = d;
      worker = &w;
    }
  }
  if (!worker) return std::nullopt;

  TaskBenefit b;
  b.task_id = task->id;
  b.worker_id = worker->id;
  b.power_to_task = task_d;
  b.uav_travel_time = task_d / uav.speed;
  b.worker_travel_time = worker_d / worker->speed;
  b.task_total_time =
      std::max(b.uav_travel_time, b.worker_travel_time) + task->cost_power / uav.speed;
  b.time_left = uav.window.downtime - snap.sys_time - b.task_total_time;
  b.power_total = b.power_to_task + task->cost_power;
  b.reward = 1.0 - clamp01(b.time_left / uav.window.length()) * (b.power_total / uav.full_power);
  return b;
}

std::optional<ChargeBenefit> estimate_charge_benefit(const Uav& uav, const WorldSnapshot& snap) {
  const ChargePoint* cp = nullptr;
  double cp_d = kInf;
  for (const auto& c : snap.charge_points) {
    if (!in_range(uav, c.loc)) continue;
    if (!feasible_charge(uav, c)) continue;
    double d = dis(uav.loc, c.loc);
    if (d < cp_d) {
      cp_d = d;
      cp = &c;
    }
  }
  if (!cp) return std::nullopt;

  const Vehicle* vehicle = nullptr;
  double vehicle_d = kInf;
  for (const auto& v : snap.vehicles) {
    if (!in_range(uav, v.loc)) continue;
    double d = dis(cp->loc, v.loc);
    if (d < vehicle_d) {
      vehicle_d = d;
      vehicle = &v;
    }
  }
  if (!vehicle) return std::nullopt;

  ChargeBenefit b;
  b.charge_id = cp->id;
  b.vehicle_id = vehicle->id;
  b.power_to_charge = cp_d;
  b.uav_travel_time = cp_d / uav.speed;
  b.vehicle_travel_time = vehicle_d / vehicle->speed;
  // Power on arrival is power - power_to_charge, kept as written even though
  // charging always ends at full_power.
  b.charge_total_time =
      std::max(b.uav_travel_time, b.vehicle_travel_time) +
      (uav.full_power - (uav.power - b.power_to_charge)) / vehicle->charge_power;
  b.time_left = uav.window.downtime - snap.sys_time - b.charge_total_time;
  b.power_gain = uav.full_power - uav.power;
  b.reward = clamp01(b.time_left / uav.window.length()) * (b.power_gain / uav.full_power);
  return b;
}

UavRole assign_role(const Uav& uav, const WorldSnapshot& snap) {
  UavRole role;
  role.task = estimate_task_benefit(uav, snap);
  role.charge = estimate_charge_benefit(uav, snap);
  if (role.task && role.charge)
    role.kind = role.task->reward >= role.charge->reward ? RoleKind::TaskSeeker
                                                         : RoleKind::ChargeSeeker;
  else if (role.task)
    role.kind = RoleKind::TaskSeeker;
  else if (role.charge)
    role.kind = RoleKind::ChargeSeeker;
  else
    role.kind = RoleKind::Idle;
  return role;
}

}  // namespace uwv
