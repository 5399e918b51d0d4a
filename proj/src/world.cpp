#include "uwvsim/world.hpp"

#include <limits>
#include <stdexcept>

namespace uwv {

std::string to_string(AgentRef a) {
  const char* kind = a.kind == AgentKind::Uav      ? "uav"
                     : a.kind == AgentKind::Worker ? "worker"
                                                   : "vehicle";
  return std::string(kind) + ":" + std::to_string(a.id);
}

namespace {
template <class T>
const T* find_by_id(const std::vector<T>& v, int id) {
  for (const auto& e : v)
    if (e.id == id) return &e;
  return nullptr;
}
}  // namespace

const Uav* WorldSnapshot::find_uav(int id) const { return find_by_id(uavs, id); }
const Worker* WorldSnapshot::find_worker(int id) const { return find_by_id(workers, id); }
const Vehicle* WorldSnapshot::find_vehicle(int id) const { return find_by_id(vehicles, id); }
const TaskPoint* WorldSnapshot::find_task(int id) const { return find_by_id(open_tasks, id); }
const ChargePoint* WorldSnapshot::find_charge(int id) const { return find_by_id(charge_points, id); }

std::optional<Position> WorldSnapshot::agent_position(AgentRef a) const {
  switch (a.kind) {
    case AgentKind::Uav:
      if (const auto* u = find_uav(a.id)) return u->loc;
      break;
    case AgentKind::Worker:
      if (const auto* w = find_worker(a.id)) return w->loc;
      break;
    case AgentKind::Vehicle:
      if (const auto* v = find_vehicle(a.id)) return v->loc;
      break;
  }
  return std::nullopt;
}

double nearest_charge_distance(Position from, std::span<const ChargePoint> cps) {
  if (cps.empty())
    throw std::invalid_argument("invalid scenario: charge point set is empty");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& cp : cps) best = std::min(best, dis(from, cp.loc));
  return best;
}

bool feasible_charge(const Uav& uav, const ChargePoint& cp) {
  return dis(cp.loc, uav.loc) <= uav.power;
}

bool feasible_task(const Uav& uav, const TaskPoint& task,
                   std::span<const ChargePoint> all_charge_points) {
  return dis(uav.loc, task.loc) + task.cost_power +
             nearest_charge_distance(task.loc, all_charge_points) <=
         uav.power;
}

}  // namespace uwv
