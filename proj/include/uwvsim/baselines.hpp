#pragma once

#include "uwvsim/scheduler.hpp"

// Non-learned comparison schedulers sharing the per-epoch decision
// interface: GREEDY nearest-choice with minimum-distance contention,
// K-winners-take-all intersection matching, and the uniform-sampling
// variant of the local-Nash loop.

namespace uwv {

struct KwtaConfig {
  int k1 = 3;  // UAV-side retention
  int k2 = 3;  // worker/vehicle-side retention
};

// Every agent picks the nearest point for its role; same-type contention for
// one point is resolved by minimum distance (ties to the lower id) and the
// losers hold for the epoch. Deterministic, no rng draws.
JointAssignment greedy_decide(const WorldSnapshot& snap, const RoleMap& roles,
                              const ActionMap& locked);

// Agents retain their k1/k2 nearest points; triads are matched greedily on
// set intersections by combined distance. Agents left unmatched attempt
// their candidates in descending score order, claiming the first point no
// one else has taken. Deterministic, no rng draws.
JointAssignment kwta_decide(const WorldSnapshot& snap, const RoleMap& roles,
                            const ActionMap& locked, const KwtaConfig& cfg);

// decide_epoch with uniform action sampling instead of softmax weighting;
// indicators, the local-Nash loop, and the fallback are unchanged.
JointAssignment raln_decide(const WorldSnapshot& snap, const RoleMap& roles,
                            const ActionMap& locked, std::mt19937_64& rng,
                            const SchedulerConfig& cfg);

}  // namespace uwv
