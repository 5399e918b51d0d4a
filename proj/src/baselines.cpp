#include "uwvsim/baselines.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>

namespace uwv {

namespace {

struct GameAgent {
  AgentRef ref;
  CandidateSet cands;
};

// Unlocked online agents with their candidate sets, in fixed global order.
std::vector<GameAgent> game_agents(const WorldSnapshot& snap, const RoleMap& roles,
                                   const ActionMap& locked, bool idle_fallback) {
  std::vector<GameAgent> out;
  auto add = [&](AgentRef ref, const UavRole* role) {
    if (locked.contains(ref)) return;
    out.push_back({ref, candidate_actions(ref, role, snap)});
  };
  for (const auto& u : snap.uavs) {
    AgentRef ref{AgentKind::Uav, u.id};
    if (locked.contains(ref)) continue;
    auto it = roles.find(u.id);
    const UavRole* role = it != roles.end() ? &it->second : nullptr;
    auto cands = candidate_actions(ref, role, snap);
    if (idle_fallback && (!role || role->kind == RoleKind::Idle)) {
      // A UAV with no expected benefit (no partner in range) still heads for
      // its nearest feasible point, tasks first.
      UavRole forced;
      forced.kind = RoleKind::TaskSeeker;
      cands = candidate_actions(ref, &forced, snap);
      if (cands.candidates.front().action.kind == ActionKind::Hold) {
        forced.kind = RoleKind::ChargeSeeker;
        cands = candidate_actions(ref, &forced, snap);
      }
    }
    out.push_back({ref, std::move(cands)});
  }
  for (const auto& w : snap.workers) add({AgentKind::Worker, w.id}, nullptr);
  for (const auto& v : snap.vehicles) add({AgentKind::Vehicle, v.id}, nullptr);
  return out;
}

// Nearest candidate; candidate lists are ordered by target id, so the first
// minimum keeps the lowest id on distance ties.
const Candidate* nearest_candidate(const CandidateSet& set) {
  const Candidate* best = nullptr;
  for (const auto& cd : set.candidates) {
    if (cd.action.kind == ActionKind::Hold) continue;
    if (!best || cd.distance < best->distance) best = &cd;
  }
  return best;
}

JointAssignment finish(const WorldSnapshot& snap, const ActionMap& locked,
                       std::map<AgentRef, Action> chosen) {
  JointAssignment out;
  out.actions = std::move(chosen);
  for (const auto& [ref, act] : locked) out.actions[ref] = act;
  // Every online agent appears in the profile.
  for (const auto& u : snap.uavs) out.actions.try_emplace({AgentKind::Uav, u.id});
  for (const auto& w : snap.workers) out.actions.try_emplace({AgentKind::Worker, w.id});
  for (const auto& v : snap.vehicles) out.actions.try_emplace({AgentKind::Vehicle, v.id});
  return out;
}

}  // namespace

JointAssignment greedy_decide(const WorldSnapshot& snap, const RoleMap& roles,
                              const ActionMap& locked) {
  auto agents = game_agents(snap, roles, locked, true);

  std::map<AgentRef, Action> chosen;
  std::map<AgentRef, double> chosen_dist;
  for (const auto& a : agents) {
    if (const Candidate* best = nearest_candidate(a.cands)) {
      chosen[a.ref] = best->action;
      chosen_dist[a.ref] = best->distance;
    } else {
      chosen[a.ref] = Action{};
    }
  }

  // Minimum-distance contention per point among same-type agents; the
  // losers hold for this epoch.
  std::map<std::pair<ActionKind, int>, std::map<AgentKind, AgentRef>> winners;
  for (const auto& [ref, act] : chosen) {
    if (act.kind == ActionKind::Hold) continue;
    auto key = std::make_pair(act.kind, act.target);
    auto [it, inserted] = winners[key].try_emplace(ref.kind, ref);
    if (inserted) continue;
    AgentRef cur = it->second;
    if (chosen_dist[ref] < chosen_dist[cur] ||
        (chosen_dist[ref] == chosen_dist[cur] && ref < cur))
      it->second = ref;
  }
  for (auto& [ref, act] : chosen) {
    if (act.kind == ActionKind::Hold) continue;
    if (winners[{act.kind, act.target}][ref.kind] != ref) act = Action{};
  }
  return finish(snap, locked, std::move(chosen));
}

JointAssignment kwta_decide(const WorldSnapshot& snap, const RoleMap& roles,
                            const ActionMap& locked, const KwtaConfig& cfg) {
  if (cfg.k1 < 1 || cfg.k2 < 1)
    throw std::invalid_argument("kwta_decide: k1 and k2 must be at least 1");

  auto agents = game_agents(snap, roles, locked, false);

  // Top-k candidates per agent, nearest first, ties to the lower id.
  std::map<AgentRef, std::vector<Action>> tops;
  std::map<AgentRef, std::vector<Action>> scored;  // full list in score order
  for (const auto& a : agents) {
    int k = a.ref.kind == AgentKind::Uav ? cfg.k1 : cfg.k2;
    std::vector<std::pair<double, Action>> all;
    for (const auto& cd : a.cands.candidates)
      if (cd.action.kind != ActionKind::Hold) all.emplace_back(cd.distance, cd.action);
    std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) {
      return std::tie(x.first, x.second) < std::tie(y.first, y.second);
    });
    auto& ordered = scored[a.ref];
    for (const auto& [d, act] : all) ordered.push_back(act);
    auto& top = tops[a.ref];
    top.assign(ordered.begin(),
               ordered.begin() + std::min<std::size_t>(ordered.size(), std::size_t(k)));
  }

  auto position_of = [&](AgentRef ref) { return *snap.agent_position(ref); };
  auto radius_of = [&](AgentRef ref) {
    switch (ref.kind) {
      case AgentKind::Uav: return snap.find_uav(ref.id)->radius;
      case AgentKind::Worker: return snap.find_worker(ref.id)->radius;
      default: return snap.find_vehicle(ref.id)->radius;
    }
  };
  auto seeks = [&](const GameAgent& a, ActionKind kind) {
    return !a.cands.candidates.empty() && a.cands.candidates.front().action.kind == kind;
  };

  // Each agent decides on its own: the best of its retained points that some
  // in-range counterpart also retained, falling back to plain score order
  // when no intersection exists. There is no cross-agent deduplication, so
  // several agents may pile onto one point.
  std::map<AgentRef, Action> chosen;
  for (const auto& a : agents) {
    if (a.cands.candidates.empty() || a.cands.candidates.front().action.kind == ActionKind::Hold) {
      chosen[a.ref] = Action{};
      continue;
    }
    ActionKind side = a.cands.candidates.front().action.kind;
    AgentKind partner_kind;
    if (a.ref.kind == AgentKind::Uav)
      partner_kind = side == ActionKind::GoToTask ? AgentKind::Worker : AgentKind::Vehicle;
    else
      partner_kind = AgentKind::Uav;

    std::set<Action> partner_union;
    Position my_pos = position_of(a.ref);
    double my_radius = radius_of(a.ref);
    for (const auto& p : agents) {
      if (p.ref.kind != partner_kind) continue;
      if (p.ref.kind == AgentKind::Uav && !seeks(p, side)) continue;
      if (dis(my_pos, position_of(p.ref)) > my_radius) continue;
      for (const auto& act : tops[p.ref]) partner_union.insert(act);
    }

    Action pick{};
    for (const auto& act : tops[a.ref])
      if (partner_union.contains(act)) {
        pick = act;
        break;
      }
    if (pick.kind == ActionKind::Hold && !scored[a.ref].empty()) pick = scored[a.ref].front();
    chosen[a.ref] = pick;
  }
  return finish(snap, locked, std::move(chosen));
}

JointAssignment raln_decide(const WorldSnapshot& snap, const RoleMap& roles,
                            const ActionMap& locked, std::mt19937_64& rng,
                            const SchedulerConfig& cfg) {
  SchedulerConfig uniform_cfg = cfg;
  uniform_cfg.sampling = SamplingPolicy::Uniform;
  return decide_epoch(snap, roles, locked, rng, uniform_cfg);
}

}  // namespace uwv
