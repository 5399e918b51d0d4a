#include "uwvsim/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace uwv {

double disk_overlap_jaccard(Position a, double ra, Position b, double rb) {
  if (ra <= 0.0 || rb <= 0.0)
    throw std::invalid_argument("disk_overlap_jaccard: radii must be positive");
  const double pi = std::numbers::pi;
  double d = dis(a, b);
  double inter;
  if (d >= ra + rb) {
    inter = 0.0;
  } else if (d <= std::abs(ra - rb)) {
    double r = std::min(ra, rb);
    inter = pi * r * r;
  } else {
    double a2 = ra * ra, b2 = rb * rb;
    double ca = std::clamp((d * d + a2 - b2) / (2.0 * d * ra), -1.0, 1.0);
    double cb = std::clamp((d * d + b2 - a2) / (2.0 * d * rb), -1.0, 1.0);
    double kite = (-d + ra + rb) * (d + ra - rb) * (d - ra + rb) * (d + ra + rb);
    inter = a2 * std::acos(ca) + b2 * std::acos(cb) - 0.5 * std::sqrt(std::max(kite, 0.0));
  }
  double uni = pi * ra * ra + pi * rb * rb - inter;
  return inter / uni;
}

CouplingReport coupling_strength(std::span<const std::pair<Position, double>> disks) {
  if (disks.size() < 2)
    throw std::invalid_argument("coupling_strength: undefined for fewer than two agents");
  CouplingReport rep;
  rep.agent_count = static_cast<int>(disks.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < disks.size(); ++i)
    for (std::size_t j = i + 1; j < disks.size(); ++j) {
      sum += disk_overlap_jaccard(disks[i].first, disks[i].second, disks[j].first,
                                  disks[j].second);
      ++rep.pair_count;
    }
  rep.epsilon = sum / rep.pair_count;
  return rep;
}

CouplingReport coupling_strength(const WorldSnapshot& snap) {
  std::vector<std::pair<Position, double>> disks;
  for (const auto& u : snap.uavs) disks.emplace_back(u.loc, u.radius);
  for (const auto& w : snap.workers) disks.emplace_back(w.loc, w.radius);
  for (const auto& v : snap.vehicles) disks.emplace_back(v.loc, v.radius);
  return coupling_strength(disks);
}

GapReport equilibrium_gap(const ActionMap& profile, const WorldSnapshot& snap) {
  GapReport rep;

  std::vector<AgentRef> task_side;
  for (const auto& w : snap.workers) task_side.push_back({AgentKind::Worker, w.id});
  for (const auto& u : snap.uavs) {
    AgentRef ref{AgentKind::Uav, u.id};
    auto it = profile.find(ref);
    if (it != profile.end() && it->second.kind == ActionKind::GoToTask) task_side.push_back(ref);
  }
  rep.task_side_agents = static_cast<int>(task_side.size());

  // Global match count of the profile: tasks with at least one UAV and one
  // worker committed to them.
  std::map<int, std::pair<bool, bool>> targeted;  // task id -> (uav, worker)
  for (const auto& [ref, act] : profile) {
    if (act.kind != ActionKind::GoToTask) continue;
    auto& flags = targeted[act.target];
    if (ref.kind == AgentKind::Uav) flags.first = true;
    if (ref.kind == AgentKind::Worker) flags.second = true;
  }
  for (const auto& [tid, flags] : targeted)
    if (flags.first && flags.second && snap.find_task(tid)) ++rep.global_completed;

  for (AgentRef a : task_side) rep.sum_reward += reward_task(a, profile, snap);

  if (rep.global_completed > 0 && rep.task_side_agents > 0)
    rep.alpha_hat = rep.sum_reward / (rep.task_side_agents * rep.global_completed);
  rep.gap = rep.global_completed - rep.sum_reward;
  return rep;
}

}  // namespace uwv
