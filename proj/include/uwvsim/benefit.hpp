#pragma once

#include <map>
#include <optional>

#include "uwvsim/world.hpp"

namespace uwv {

// Expected benefit of a UAV executing the nearest feasible task together
// with the in-range worker best placed to join it. Rewards are normalized
// to [0,1] so task and charge benefits are directly comparable.
struct TaskBenefit {
  int task_id = -1;
  int worker_id = -1;
  double power_to_task = 0.0;      // km flown to reach the task
  double uav_travel_time = 0.0;    // min
  double worker_travel_time = 0.0; // min
  double task_total_time = 0.0;    // rendezvous + execution, min
  double time_left = 0.0;          // online time remaining after completion (may be negative)
  double power_total = 0.0;        // travel + execution cost, km
  double reward = 0.0;
};

// Expected benefit of a UAV being fully recharged at the nearest feasible
// charge point by the in-range vehicle best placed to serve it.
struct ChargeBenefit {
  int charge_id = -1;
  int vehicle_id = -1;
  double power_to_charge = 0.0;
  double uav_travel_time = 0.0;
  double vehicle_travel_time = 0.0;
  double charge_total_time = 0.0;
  double time_left = 0.0;
  double power_gain = 0.0;  // full_power - power, km
  double reward = 0.0;
};

enum class RoleKind { TaskSeeker, ChargeSeeker, Idle };

struct UavRole {
  RoleKind kind = RoleKind::Idle;
  std::optional<TaskBenefit> task;
  std::optional<ChargeBenefit> charge;
};

// Absent when no feasible task exists or no online worker is in range.
std::optional<TaskBenefit> estimate_task_benefit(const Uav& uav, const WorldSnapshot& snap);

// Absent when no feasible charge point exists or no online vehicle is in range.
std::optional<ChargeBenefit> estimate_charge_benefit(const Uav& uav, const WorldSnapshot& snap);

// Equal rewards go to the task side. A UAV with neither benefit is Idle.
UavRole assign_role(const Uav& uav, const WorldSnapshot& snap);

using RoleMap = std::map<int, UavRole>;

}  // namespace uwv
