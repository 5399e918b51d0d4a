#pragma once

// Test-side oracle: an independent, brute-force model of the per-epoch
// game. Candidate filters, match counting, per-agent rewards, and the
// satisfaction flags are all recomputed here from the domain rules with
// their own arithmetic, so the production scheduler is checked against a
// second implementation rather than against itself. Only usable on micro
// instances (the profile space is enumerated exhaustively).

#include <cmath>
#include <map>
#include <optional>
#include <vector>

#include "uwvsim/benefit.hpp"
#include "uwvsim/scheduler.hpp"
#include "uwvsim/world.hpp"

namespace oracle {

inline double dist(uwv::Position a, uwv::Position b) {
  double dx = a.x - b.x, dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

struct Agent {
  uwv::AgentRef ref;
  uwv::Position pos;
  double radius = 0.0;
  double speed = 0.0;
  double full_power = 0.0;
  double power = 0.0;
  std::vector<uwv::Action> candidates;
};

struct Game {
  std::vector<Agent> agents;
  std::map<int, uwv::Position> task_pos;
  std::map<int, uwv::Position> charge_pos;
};

inline std::vector<uwv::Action> agent_candidates(uwv::AgentRef ref, const uwv::UavRole* role,
                                                 const uwv::WorldSnapshot& snap) {
  std::vector<uwv::Action> out;
  if (ref.kind == uwv::AgentKind::Uav) {
    const uwv::Uav* u = snap.find_uav(ref.id);
    if (role && role->kind == uwv::RoleKind::TaskSeeker) {
      for (const auto& t : snap.open_tasks) {
        if (dist(u->loc, t.loc) > u->radius) continue;
        double back = std::numeric_limits<double>::infinity();
        for (const auto& cp : snap.charge_points) back = std::min(back, dist(t.loc, cp.loc));
        if (dist(u->loc, t.loc) + t.cost_power + back <= u->power)
          out.push_back({uwv::ActionKind::GoToTask, t.id});
      }
    } else if (role && role->kind == uwv::RoleKind::ChargeSeeker) {
      for (const auto& cp : snap.charge_points)
        if (dist(u->loc, cp.loc) <= u->radius && dist(cp.loc, u->loc) <= u->power)
          out.push_back({uwv::ActionKind::GoToCharge, cp.id});
    }
  } else if (ref.kind == uwv::AgentKind::Worker) {
    const uwv::Worker* w = snap.find_worker(ref.id);
    for (const auto& t : snap.open_tasks)
      if (dist(w->loc, t.loc) <= w->radius) out.push_back({uwv::ActionKind::GoToTask, t.id});
  } else {
    const uwv::Vehicle* v = snap.find_vehicle(ref.id);
    for (const auto& cp : snap.charge_points)
      if (dist(v->loc, cp.loc) <= v->radius) out.push_back({uwv::ActionKind::GoToCharge, cp.id});
  }
  if (out.empty()) out.push_back({uwv::ActionKind::Hold, -1});
  return out;
}

inline Game build_game(const uwv::WorldSnapshot& snap, const uwv::RoleMap& roles) {
  Game g;
  for (const auto& u : snap.uavs) {
    Agent a{{uwv::AgentKind::Uav, u.id}, u.loc, u.radius, u.speed, u.full_power, u.power, {}};
    auto it = roles.find(u.id);
    a.candidates = agent_candidates(a.ref, it != roles.end() ? &it->second : nullptr, snap);
    g.agents.push_back(a);
  }
  for (const auto& w : snap.workers) {
    Agent a{{uwv::AgentKind::Worker, w.id}, w.loc, w.radius, w.speed, 0, 0, {}};
    a.candidates = agent_candidates(a.ref, nullptr, snap);
    g.agents.push_back(a);
  }
  for (const auto& v : snap.vehicles) {
    Agent a{{uwv::AgentKind::Vehicle, v.id}, v.loc, v.radius, v.speed, 0, 0, {}};
    a.candidates = agent_candidates(a.ref, nullptr, snap);
    g.agents.push_back(a);
  }
  for (const auto& t : snap.open_tasks) g.task_pos[t.id] = t.loc;
  for (const auto& cp : snap.charge_points) g.charge_pos[cp.id] = cp.loc;
  return g;
}

using Profile = std::vector<uwv::Action>;

// Distinct tasks targeted by at least one UAV and one worker.
inline int global_matches(const Game& g, const Profile& prof) {
  std::map<int, std::pair<bool, bool>> hit;
  for (std::size_t i = 0; i < g.agents.size(); ++i) {
    if (prof[i].kind != uwv::ActionKind::GoToTask) continue;
    if (g.agents[i].ref.kind == uwv::AgentKind::Uav) hit[prof[i].target].first = true;
    if (g.agents[i].ref.kind == uwv::AgentKind::Worker) hit[prof[i].target].second = true;
  }
  int n = 0;
  for (const auto& [tid, flags] : hit)
    if (flags.first && flags.second) ++n;
  return n;
}

namespace detail {

inline bool earlier(const Game& g, int a, int b, uwv::Position target) {
  double ta = dist(g.agents[a].pos, target) / g.agents[a].speed;
  double tb = dist(g.agents[b].pos, target) / g.agents[b].speed;
  if (ta != tb) return ta < tb;
  return g.agents[a].ref < g.agents[b].ref;
}

}  // namespace detail

// Per-agent reward recomputed from scratch: matched tasks visible to the
// observer count once each, contention losers score zero.
inline double reward_of(const Game& g, const Profile& prof, int obs) {
  const Agent& o = g.agents[obs];
  bool task_side = o.ref.kind == uwv::AgentKind::Worker ||
                   (o.ref.kind == uwv::AgentKind::Uav &&
                    (prof[obs].kind != uwv::ActionKind::GoToCharge));

  if (task_side) {
    std::map<int, std::vector<int>> us, ws;
    for (std::size_t i = 0; i < g.agents.size(); ++i) {
      if (prof[i].kind != uwv::ActionKind::GoToTask) continue;
      if (g.agents[i].ref.kind == uwv::AgentKind::Uav) us[prof[i].target].push_back(i);
      if (g.agents[i].ref.kind == uwv::AgentKind::Worker) ws[prof[i].target].push_back(i);
    }
    double count = 0;
    for (const auto& [tid, ulist] : us) {
      auto wit = ws.find(tid);
      if (wit == ws.end()) continue;
      uwv::Position tp = g.task_pos.at(tid);
      int bu = ulist.front();
      for (int i : ulist)
        if (detail::earlier(g, i, bu, tp)) bu = i;
      int bw = wit->second.front();
      for (int i : wit->second)
        if (detail::earlier(g, i, bw, tp)) bw = i;
      bool obs_is_loser = false;
      for (int i : ulist)
        if (i == obs && i != bu) obs_is_loser = true;
      for (int i : wit->second)
        if (i == obs && i != bw) obs_is_loser = true;
      if (obs_is_loser) return 0.0;
      if (dist(o.pos, g.agents[bu].pos) <= o.radius &&
          dist(o.pos, g.agents[bw].pos) <= o.radius && dist(o.pos, tp) <= o.radius)
        count += 1;
    }
    return count;
  }

  // Charge side.
  std::map<int, std::vector<int>> us, vs;
  for (std::size_t i = 0; i < g.agents.size(); ++i) {
    if (prof[i].kind != uwv::ActionKind::GoToCharge) continue;
    if (g.agents[i].ref.kind == uwv::AgentKind::Uav) us[prof[i].target].push_back(i);
    if (g.agents[i].ref.kind == uwv::AgentKind::Vehicle) vs[prof[i].target].push_back(i);
  }
  if (o.ref.kind == uwv::AgentKind::Vehicle && prof[obs].kind == uwv::ActionKind::GoToCharge) {
    auto& vlist = vs[prof[obs].target];
    if (us.contains(prof[obs].target) && vlist.size() > 1) {
      uwv::Position cp = g.charge_pos.at(prof[obs].target);
      int bv = vlist.front();
      for (int i : vlist)
        if (detail::earlier(g, i, bv, cp)) bv = i;
      if (bv != obs) return 0.0;
    }
  }
  double sum = 0.0;
  for (const auto& [cid, ulist] : us) {
    auto vit = vs.find(cid);
    if (vit == vs.end()) continue;
    bool visible_vehicle = false;
    for (int v : vit->second)
      if (dist(o.pos, g.agents[v].pos) <= o.radius) visible_vehicle = true;
    if (!visible_vehicle) continue;
    for (int u : ulist)
      if (dist(o.pos, g.agents[u].pos) <= o.radius)
        sum += g.agents[u].full_power - g.agents[u].power;
  }
  return sum;
}

inline bool agent_satisfied(const Game& g, Profile& prof, int obs) {
  double base = reward_of(g, prof, obs);
  uwv::Action saved = prof[obs];
  for (const auto& cand : g.agents[obs].candidates) {
    if (cand == saved) continue;
    prof[obs] = cand;
    double r = reward_of(g, prof, obs);
    prof[obs] = saved;
    if (r > base + 1e-9) return false;
  }
  return true;
}

inline bool is_local_nash(const Game& g, Profile prof) {
  for (std::size_t i = 0; i < g.agents.size(); ++i)
    if (!agent_satisfied(g, prof, static_cast<int>(i))) return false;
  return true;
}

// Exhaustive sweep over the joint profile space.
template <class Fn>
void for_each_profile(const Game& g, Fn&& fn) {
  Profile prof(g.agents.size());
  std::vector<std::size_t> idx(g.agents.size(), 0);
  while (true) {
    for (std::size_t i = 0; i < g.agents.size(); ++i) prof[i] = g.agents[i].candidates[idx[i]];
    fn(prof);
    std::size_t i = 0;
    while (i < idx.size()) {
      if (++idx[i] < g.agents[i].candidates.size()) break;
      idx[i] = 0;
      ++i;
    }
    if (i == idx.size()) break;
  }
}

inline int max_matches(const Game& g) {
  int best = 0;
  for_each_profile(g, [&](const Profile& p) { best = std::max(best, global_matches(g, p)); });
  return best;
}

inline std::size_t profile_count(const Game& g) {
  std::size_t n = 1;
  for (const auto& a : g.agents) n *= a.candidates.size();
  return n;
}

}  // namespace oracle
