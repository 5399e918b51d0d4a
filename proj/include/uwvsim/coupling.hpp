#pragma once

#include <optional>
#include <span>
#include <utility>

#include "uwvsim/scheduler.hpp"
#include "uwvsim/world.hpp"

// Coupling strength of the communication network (mean pairwise Jaccard
// overlap of communication disks) and the per-epoch diagnostics comparing
// the sum of locally perceived task rewards against the profile's global
// match count.

namespace uwv {

// area(A ∩ B) / area(A ∪ B) via the closed-form lens area.
double disk_overlap_jaccard(Position a, double ra, Position b, double rb);

struct CouplingReport {
  double epsilon = 0.0;  // mean pairwise Jaccard overlap, in [0,1]
  int agent_count = 0;
  int pair_count = 0;
};

// Mean over all unordered pairs of online agents (every kind enters the
// pair set). Throws std::invalid_argument when fewer than two agents.
CouplingReport coupling_strength(std::span<const std::pair<Position, double>> disks);
CouplingReport coupling_strength(const WorldSnapshot& snap);

struct GapReport {
  double sum_reward = 0.0;   // sum of per-agent task rewards over task-side agents
  int global_completed = 0;  // tasks targeted by at least one UAV and one worker
  int task_side_agents = 0;
  // sum_reward / (task_side_agents * global_completed); absent when no match.
  std::optional<double> alpha_hat;
  double gap = 0.0;  // global_completed - sum_reward, kept raw
};

// Task-side agents are all workers plus every UAV whose action targets a
// task. `profile` must cover all online agents, locked ones included.
GapReport equilibrium_gap(const ActionMap& profile, const WorldSnapshot& snap);

}  // namespace uwv
