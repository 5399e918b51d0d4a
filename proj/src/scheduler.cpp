#include "uwvsim/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "uwvsim/random.hpp"

namespace uwv {

namespace {

constexpr double kRewardEps = 1e-9;

enum class RewardSide { Task, Charge, Both };

struct AgentView {
  AgentRef ref;
  Position pos;
  double radius = 0.0;
  double speed = 0.0;
  double full_power = 0.0;  // UAVs only
  double power = 0.0;       // UAVs only
  bool locked = false;
};

// Shared per-epoch state: the agent roster in a fixed global order, their
// candidate sets, sides, and neighbor lists. Profiles are vectors indexed
// the same way.
struct Ctx {
  const WorldSnapshot* snap = nullptr;
  bool union_mode = false;
  std::vector<AgentView> agents;
  std::map<AgentRef, int> index;
  std::vector<CandidateSet> cands;
  std::vector<RewardSide> side;
  std::vector<std::vector<int>> neighbors;
  std::map<int, Position> task_pos;
  std::map<int, Position> charge_pos;

  int count() const { return static_cast<int>(agents.size()); }
};

Ctx build_ctx(const WorldSnapshot& snap, const RoleMap& roles, const ActionMap& locked,
              bool union_mode) {
  Ctx c;
  c.snap = &snap;
  c.union_mode = union_mode;
  for (const auto& u : snap.uavs)
    c.agents.push_back({{AgentKind::Uav, u.id}, u.loc, u.radius, u.speed, u.full_power, u.power,
                        locked.contains({AgentKind::Uav, u.id})});
  for (const auto& w : snap.workers)
    c.agents.push_back(
        {{AgentKind::Worker, w.id}, w.loc, w.radius, w.speed, 0.0, 0.0,
         locked.contains({AgentKind::Worker, w.id})});
  for (const auto& v : snap.vehicles)
    c.agents.push_back(
        {{AgentKind::Vehicle, v.id}, v.loc, v.radius, v.speed, 0.0, 0.0,
         locked.contains({AgentKind::Vehicle, v.id})});
  std::sort(c.agents.begin(), c.agents.end(),
            [](const AgentView& a, const AgentView& b) { return a.ref < b.ref; });

  const int n = c.count();
  c.cands.resize(n);
  c.side.resize(n, RewardSide::Task);
  for (int i = 0; i < n; ++i) {
    const auto& a = c.agents[i];
    c.index[a.ref] = i;
    switch (a.ref.kind) {
      case AgentKind::Worker:
        c.side[i] = RewardSide::Task;
        break;
      case AgentKind::Vehicle:
        c.side[i] = RewardSide::Charge;
        break;
      case AgentKind::Uav: {
        if (union_mode) {
          c.side[i] = RewardSide::Both;
        } else if (a.locked) {
          auto it = locked.find(a.ref);
          c.side[i] = (it != locked.end() && it->second.kind == ActionKind::GoToCharge)
                          ? RewardSide::Charge
                          : RewardSide::Task;
        } else if (auto it = roles.find(a.ref.id); it != roles.end()) {
          c.side[i] = it->second.kind == RoleKind::ChargeSeeker ? RewardSide::Charge
                                                                : RewardSide::Task;
        }
        break;
      }
    }
    if (!a.locked) {
      const UavRole* role = nullptr;
      if (a.ref.kind == AgentKind::Uav)
        if (auto it = roles.find(a.ref.id); it != roles.end()) role = &it->second;
      c.cands[i] = candidate_actions(a.ref, role, snap, union_mode);
    } else {
      c.cands[i].agent = a.ref;
    }
  }

  c.neighbors.resize(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && dis(c.agents[i].pos, c.agents[j].pos) <= c.agents[i].radius)
        c.neighbors[i].push_back(j);

  for (const auto& t : snap.open_tasks) c.task_pos[t.id] = t.loc;
  for (const auto& cp : snap.charge_points) c.charge_pos[cp.id] = cp.loc;
  return c;
}

using Profile = std::vector<Action>;

// Arrival-time ordering used to pick winners when several same-type agents
// target one point.
bool arrives_before(const Ctx& c, int a, int b, Position target) {
  double ta = dis(c.agents[a].pos, target) / c.agents[a].speed;
  double tb = dis(c.agents[b].pos, target) / c.agents[b].speed;
  if (ta != tb) return ta < tb;
  return c.agents[a].ref < c.agents[b].ref;
}

struct TaskMatches {
  struct Match {
    int task_id;
    int uav_idx;
    int worker_idx;
  };
  std::vector<Match> matches;   // ascending task id
  std::vector<char> surplus;    // lost a same-type contention at a matched task
};

TaskMatches compute_task_matches(const Ctx& c, const Profile& prof) {
  std::map<int, std::vector<int>> uavs, workers;
  for (int i = 0; i < c.count(); ++i) {
    if (prof[i].kind != ActionKind::GoToTask) continue;
    if (c.agents[i].ref.kind == AgentKind::Uav)
      uavs[prof[i].target].push_back(i);
    else if (c.agents[i].ref.kind == AgentKind::Worker)
      workers[prof[i].target].push_back(i);
  }
  TaskMatches out;
  out.surplus.assign(c.count(), 0);
  for (const auto& [tid, ulist] : uavs) {
    auto wit = workers.find(tid);
    if (wit == workers.end()) continue;
    auto pit = c.task_pos.find(tid);
    if (pit == c.task_pos.end()) continue;
    Position tp = pit->second;
    int u = ulist.front();
    for (int i : ulist)
      if (arrives_before(c, i, u, tp)) u = i;
    int w = wit->second.front();
    for (int i : wit->second)
      if (arrives_before(c, i, w, tp)) w = i;
    for (int i : ulist)
      if (i != u) out.surplus[i] = 1;
    for (int i : wit->second)
      if (i != w) out.surplus[i] = 1;
    out.matches.push_back({tid, u, w});
  }
  return out;
}

double reward_task_at(const Ctx& c, const Profile& prof, int obs) {
  TaskMatches tm = compute_task_matches(c, prof);
  if (tm.surplus[obs]) return 0.0;
  const auto& o = c.agents[obs];
  int count = 0;
  for (const auto& m : tm.matches) {
    if (dis(o.pos, c.agents[m.uav_idx].pos) > o.radius) continue;
    if (dis(o.pos, c.agents[m.worker_idx].pos) > o.radius) continue;
    if (dis(o.pos, c.task_pos.at(m.task_id)) > o.radius) continue;
    ++count;
  }
  return count;
}

struct ChargeMatches {
  std::map<int, std::vector<int>> uavs_by_cp;
  std::map<int, std::vector<int>> vehicles_by_cp;
  std::vector<char> surplus;  // losing vehicles at matched charge points
};

ChargeMatches compute_charge_matches(const Ctx& c, const Profile& prof) {
  ChargeMatches out;
  out.surplus.assign(c.count(), 0);
  for (int i = 0; i < c.count(); ++i) {
    if (prof[i].kind != ActionKind::GoToCharge) continue;
    if (c.agents[i].ref.kind == AgentKind::Uav)
      out.uavs_by_cp[prof[i].target].push_back(i);
    else if (c.agents[i].ref.kind == AgentKind::Vehicle)
      out.vehicles_by_cp[prof[i].target].push_back(i);
  }
  for (const auto& [cid, vlist] : out.vehicles_by_cp) {
    if (vlist.size() < 2) continue;
    if (!out.uavs_by_cp.contains(cid)) continue;
    auto pit = c.charge_pos.find(cid);
    if (pit == c.charge_pos.end()) continue;
    int v = vlist.front();
    for (int i : vlist)
      if (arrives_before(c, i, v, pit->second)) v = i;
    for (int i : vlist)
      if (i != v) out.surplus[i] = 1;
  }
  return out;
}

double reward_charge_at(const Ctx& c, const Profile& prof, int obs) {
  ChargeMatches cm = compute_charge_matches(c, prof);
  if (cm.surplus[obs]) return 0.0;
  const auto& o = c.agents[obs];
  double sum = 0.0;
  for (const auto& [cid, ulist] : cm.uavs_by_cp) {
    auto vit = cm.vehicles_by_cp.find(cid);
    if (vit == cm.vehicles_by_cp.end()) continue;
    bool vehicle_visible = false;
    for (int v : vit->second)
      if (dis(o.pos, c.agents[v].pos) <= o.radius) {
        vehicle_visible = true;
        break;
      }
    if (!vehicle_visible) continue;
    for (int u : ulist)
      if (dis(o.pos, c.agents[u].pos) <= o.radius)
        sum += c.agents[u].full_power - c.agents[u].power;
  }
  return sum;
}

double reward_at(const Ctx& c, const Profile& prof, int obs) {
  switch (c.side[obs]) {
    case RewardSide::Task:
      return reward_task_at(c, prof, obs);
    case RewardSide::Charge:
      return reward_charge_at(c, prof, obs);
    case RewardSide::Both:
      return reward_task_at(c, prof, obs) + reward_charge_at(c, prof, obs);
  }
  return 0.0;
}

RewardIndicator indicator_at(const Ctx& c, Profile& prof, int obs) {
  RewardIndicator ind;
  ind.agent = c.agents[obs].ref;
  if (c.agents[obs].locked || c.cands[obs].candidates.size() <= 1) return ind;

  const Action current = prof[obs];
  double best = reward_at(c, prof, obs);
  const Action* best_act = nullptr;
  for (const auto& cd : c.cands[obs].candidates) {
    if (cd.action == current) continue;
    prof[obs] = cd.action;
    double r = reward_at(c, prof, obs);
    if (r > best + kRewardEps) {
      best = r;
      best_act = &cd.action;
    }
  }
  prof[obs] = current;
  if (best_act) {
    ind.satisfied = false;
    ind.best_alternative = *best_act;
  }
  return ind;
}

Action sample(const CandidateSet& set, std::mt19937_64& rng, SamplingPolicy policy) {
  return policy == SamplingPolicy::Uniform ? sample_action_uniform(set, rng)
                                           : sample_action(set, rng);
}

ActionMap profile_to_map(const Ctx& c, const Profile& prof) {
  ActionMap out;
  for (int i = 0; i < c.count(); ++i) out[c.agents[i].ref] = prof[i];
  return out;
}

Profile profile_from_map(const Ctx& c, const ActionMap& m) {
  Profile prof(c.count());
  for (int i = 0; i < c.count(); ++i)
    if (auto it = m.find(c.agents[i].ref); it != m.end()) prof[i] = it->second;
  return prof;
}

}  // namespace

CandidateSet candidate_actions(AgentRef agent, const UavRole* role, const WorldSnapshot& snap,
                               bool union_candidates) {
  CandidateSet set;
  set.agent = agent;

  auto add_tasks = [&](const Uav* uav) {
    if (uav) {
      for (const auto& t : snap.open_tasks)
        if (in_range(*uav, t.loc) && feasible_task(*uav, t, snap.charge_points))
          set.candidates.push_back({{ActionKind::GoToTask, t.id}, dis(uav->loc, t.loc)});
    }
  };
  auto add_charges = [&](const Uav* uav) {
    if (uav) {
      for (const auto& cp : snap.charge_points)
        if (in_range(*uav, cp.loc) && feasible_charge(*uav, cp))
          set.candidates.push_back({{ActionKind::GoToCharge, cp.id}, dis(uav->loc, cp.loc)});
    }
  };

  switch (agent.kind) {
    case AgentKind::Uav: {
      const Uav* uav = snap.find_uav(agent.id);
      if (union_candidates) {
        add_tasks(uav);
        add_charges(uav);
      } else if (role) {
        if (role->kind == RoleKind::TaskSeeker) add_tasks(uav);
        if (role->kind == RoleKind::ChargeSeeker) add_charges(uav);
      }
      break;
    }
    case AgentKind::Worker: {
      if (const Worker* w = snap.find_worker(agent.id))
        for (const auto& t : snap.open_tasks)
          if (in_range(*w, t.loc))
            set.candidates.push_back({{ActionKind::GoToTask, t.id}, dis(w->loc, t.loc)});
      break;
    }
    case AgentKind::Vehicle: {
      if (const Vehicle* v = snap.find_vehicle(agent.id))
        for (const auto& cp : snap.charge_points)
          if (in_range(*v, cp.loc))
            set.candidates.push_back({{ActionKind::GoToCharge, cp.id}, dis(v->loc, cp.loc)});
      break;
    }
  }

  if (set.candidates.empty()) set.candidates.push_back({{ActionKind::Hold, -1}, 0.0});

  // Softmax over -distance, shifted by the max score for stability.
  double max_score = -std::numeric_limits<double>::infinity();
  for (auto& cd : set.candidates) {
    cd.score = -cd.distance;
    max_score = std::max(max_score, cd.score);
  }
  double sum = 0.0;
  for (auto& cd : set.candidates) {
    cd.prob = std::exp(cd.score - max_score);
    sum += cd.prob;
  }
  for (auto& cd : set.candidates) cd.prob /= sum;
  return set;
}

Action sample_action(const CandidateSet& set, std::mt19937_64& rng) {
  double u = canonical(rng);
  if (set.candidates.empty()) return Action{};
  double acc = 0.0;
  for (const auto& cd : set.candidates) {
    acc += cd.prob;
    if (u < acc) return cd.action;
  }
  return set.candidates.back().action;
}

Action sample_action_uniform(const CandidateSet& set, std::mt19937_64& rng) {
  double u = canonical(rng);
  if (set.candidates.empty()) return Action{};
  auto n = set.candidates.size();
  auto idx = std::min(n - 1, static_cast<std::size_t>(u * static_cast<double>(n)));
  return set.candidates[idx].action;
}

int reward_task(AgentRef agent, const ActionMap& profile, const WorldSnapshot& snap) {
  Ctx c = build_ctx(snap, {}, {}, false);
  auto it = c.index.find(agent);
  if (it == c.index.end())
    throw std::invalid_argument("reward_task: agent " + to_string(agent) + " is not online");
  return static_cast<int>(reward_task_at(c, profile_from_map(c, profile), it->second));
}

double reward_charge(AgentRef agent, const ActionMap& profile, const WorldSnapshot& snap) {
  Ctx c = build_ctx(snap, {}, {}, false);
  auto it = c.index.find(agent);
  if (it == c.index.end())
    throw std::invalid_argument("reward_charge: agent " + to_string(agent) + " is not online");
  return reward_charge_at(c, profile_from_map(c, profile), it->second);
}

RewardIndicator reward_indicator(AgentRef agent, const ActionMap& profile,
                                 const WorldSnapshot& snap, const RoleMap& roles,
                                 bool union_candidates) {
  Ctx c = build_ctx(snap, roles, {}, union_candidates);
  auto it = c.index.find(agent);
  if (it == c.index.end())
    throw std::invalid_argument("reward_indicator: agent " + to_string(agent) + " is not online");
  Profile prof = profile_from_map(c, profile);
  return indicator_at(c, prof, it->second);
}

JointAssignment decide_epoch(const WorldSnapshot& snap, const RoleMap& roles,
                             const ActionMap& locked, std::mt19937_64& rng,
                             const SchedulerConfig& cfg) {
  if (cfg.max_rounds < 1)
    throw std::invalid_argument("decide_epoch: max_rounds must be at least 1");

  Ctx c = build_ctx(snap, roles, locked, !cfg.role_partition);
  JointAssignment out;
  const int n = c.count();
  if (n == 0) return out;

  // Initial tentative actions, drawn in fixed agent order.
  Profile prof(n);
  for (int i = 0; i < n; ++i)
    prof[i] = c.agents[i].locked ? locked.at(c.agents[i].ref)
                                 : sample(c.cands[i], rng, cfg.sampling);

  std::vector<RewardIndicator> inds(n);
  bool all_satisfied = false;
  int round = 0;
  while (round < cfg.max_rounds) {
    ++round;
    all_satisfied = true;
    for (int i = 0; i < n; ++i) {
      if (c.agents[i].locked) continue;
      inds[i] = indicator_at(c, prof, i);
      all_satisfied = all_satisfied && inds[i].satisfied;
    }
    if (all_satisfied || round == cfg.max_rounds) break;

    // Simultaneous resampling against the profile just evaluated.
    std::vector<char> resample(n, 0);
    for (int i = 0; i < n; ++i) {
      if (c.agents[i].locked) continue;
      bool unhappy = !inds[i].satisfied;
      for (int j : c.neighbors[i]) {
        if (unhappy) break;
        unhappy = !c.agents[j].locked && !inds[j].satisfied;
      }
      resample[i] = unhappy;
    }
    Profile next = prof;
    for (int i = 0; i < n; ++i)
      if (resample[i]) next[i] = sample(c.cands[i], rng, cfg.sampling);
    prof = std::move(next);
  }

  out.rounds_used = round;
  out.converged = all_satisfied;
  if (!all_satisfied) {
    // Best-response fallback for agents still able to improve.
    for (int i = 0; i < n; ++i)
      if (!c.agents[i].locked && !inds[i].satisfied) {
        prof[i] = *inds[i].best_alternative;
        out.fallback_agents.push_back(c.agents[i].ref);
      }
  }
  out.actions = profile_to_map(c, prof);
  return out;
}

bool verify_local_nash(const JointAssignment& assignment, const WorldSnapshot& snap,
                       const RoleMap& roles, const ActionMap& locked, bool union_candidates) {
  Ctx c = build_ctx(snap, roles, locked, union_candidates);
  Profile prof = profile_from_map(c, assignment.actions);
  for (int i = 0; i < c.count(); ++i) {
    if (c.agents[i].locked) continue;
    if (!indicator_at(c, prof, i).satisfied) return false;
  }
  return true;
}

}  // namespace uwv
