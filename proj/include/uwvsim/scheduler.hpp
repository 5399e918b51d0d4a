#pragma once

#include <compare>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "uwvsim/benefit.hpp"
#include "uwvsim/world.hpp"

// Per-epoch decision engine: softmax action sampling over reachable points
// and a synchronous resample-until-local-Nash loop. An agent is satisfied
// (S = 1) when no unilateral action change would increase its reward with
// all other actions held fixed; the loop terminates when every agent and
// all agents within its communication range are satisfied.

namespace uwv {

enum class ActionKind { GoToTask, GoToCharge, Hold };

struct Action {
  ActionKind kind = ActionKind::Hold;
  int target = -1;  // task id or charge point id, -1 for Hold
  auto operator<=>(const Action&) const = default;
};

using ActionMap = std::map<AgentRef, Action>;

struct Candidate {
  Action action;
  double distance = 0.0;
  double score = 0.0;  // -distance
  double prob = 0.0;
};

struct CandidateSet {
  AgentRef agent;
  std::vector<Candidate> candidates;
};

struct RewardIndicator {
  AgentRef agent;
  bool satisfied = true;                   // S = 1
  std::optional<Action> best_alternative;  // present iff satisfied == false
};

struct JointAssignment {
  int epoch = 0;
  ActionMap actions;  // every online agent, locked ones included
  bool converged = true;
  int rounds_used = 0;
  std::vector<AgentRef> fallback_agents;
};

enum class SamplingPolicy { SoftmaxByDistance, Uniform };

struct SchedulerConfig {
  int max_rounds = 200;
  SamplingPolicy sampling = SamplingPolicy::SoftmaxByDistance;
  // When false, UAVs skip the role partition and game over the union of
  // feasible tasks and charge points (timing ablation).
  bool role_partition = true;
};

// Candidates are every reachable point that passes the agent's feasibility
// filter: task seekers get feasible open tasks in range, charge seekers get
// feasible charge points in range, workers get open tasks, vehicles get
// charge points. Hold is emitted only when the set would otherwise be empty.
// Probabilities follow softmax over negated distances, computed after
// subtracting the maximum score. `role` applies to UAVs only; pass nullptr
// for workers and vehicles.
CandidateSet candidate_actions(AgentRef agent, const UavRole* role, const WorldSnapshot& snap,
                               bool union_candidates = false);

// Both samplers consume exactly one rng draw per call.
Action sample_action(const CandidateSet& set, std::mt19937_64& rng);
Action sample_action_uniform(const CandidateSet& set, std::mt19937_64& rng);

// Number of distinct tasks targeted by both a UAV and a worker, counted from
// `agent`'s viewpoint: the winning pair and the task must all lie inside its
// communication range. When several same-type agents target one point the
// earliest arrival (distance over speed, ties to the lower id) wins; an
// agent that lost such a contention scores zero for the round.
int reward_task(AgentRef agent, const ActionMap& profile, const WorldSnapshot& snap);

// Power in km that would be restored to UAVs visible to `agent` whose target
// charge point is also targeted by a visible vehicle. A vehicle that lost a
// same-type contention scores zero.
double reward_charge(AgentRef agent, const ActionMap& profile, const WorldSnapshot& snap);

RewardIndicator reward_indicator(AgentRef agent, const ActionMap& profile,
                                 const WorldSnapshot& snap, const RoleMap& roles,
                                 bool union_candidates = false);

// Synchronous rounds: indicators are evaluated against the previous round's
// profile and every unsatisfied agent (own S = 0 or any in-range neighbor
// with S = 0) resamples simultaneously. Agents in `locked` keep their given
// action and participate only as fixed neighbors. If max_rounds is reached,
// each still-unsatisfied agent adopts its recorded best alternative and the
// assignment is flagged converged = false with those agents listed.
// Throws std::invalid_argument when cfg.max_rounds < 1.
JointAssignment decide_epoch(const WorldSnapshot& snap, const RoleMap& roles,
                             const ActionMap& locked, std::mt19937_64& rng,
                             const SchedulerConfig& cfg);

// Post-hoc certificate: true iff no unlocked agent can improve its reward by
// a unilateral change under the final profile.
bool verify_local_nash(const JointAssignment& assignment, const WorldSnapshot& snap,
                       const RoleMap& roles, const ActionMap& locked,
                       bool union_candidates = false);

}  // namespace uwv
