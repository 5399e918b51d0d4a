#include "uwvsim/simkernel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <fstream>
#include <limits>
#include <map>
#include <stdexcept>

#include "json.hpp"
#include "uwvsim/errors.hpp"

namespace uwv {

namespace {
constexpr double kEps = 1e-9;
}

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Paln: return "paln";
    case Algorithm::Raln: return "raln";
    case Algorithm::Greedy: return "greedy";
    case Algorithm::Kwta: return "kwta";
  }
  return "?";
}

Algorithm algorithm_from_string(const std::string& name) {
  if (name == "paln") return Algorithm::Paln;
  if (name == "raln") return Algorithm::Raln;
  if (name == "greedy") return Algorithm::Greedy;
  if (name == "kwta") return Algorithm::Kwta;
  throw ParseError("unknown algorithm '" + name + "' (expected paln|raln|greedy|kwta)");
}

const char* to_string(Phase p) {
  switch (p) {
    case Phase::Offline: return "offline";
    case Phase::Idle: return "idle";
    case Phase::Travelling: return "travelling";
    case Phase::ExecutingTask: return "executing";
    case Phase::QueuedAtCharge: return "queued";
    case Phase::Charging: return "charging";
  }
  return "?";
}

void validate(const SimConfig& cfg) {
  if (!(cfg.tick > 0.0 && cfg.tick <= cfg.interval && cfg.interval <= cfg.limit_time))
    throw ConstraintError("config: need 0 < tick <= interval <= limit_time");
  double ratio = cfg.limit_time / cfg.interval;
  if (std::abs(ratio - std::round(ratio)) > 1e-9)
    throw ConstraintError("config: limit_time must be a multiple of interval");
  if (cfg.max_rounds < 1) throw ConstraintError("config: max_rounds must be at least 1");
  if (cfg.kwta.k1 < 1 || cfg.kwta.k2 < 1)
    throw ConstraintError("config: k1 and k2 must be at least 1");
  if (cfg.radius_override && *cfg.radius_override <= 0.0)
    throw ConstraintError("config: radius override must be positive");
}

struct Simulation::Impl {
  // Runtime agent state. Commitments keep the acting Action; `locked` marks
  // membership in a matched pair or charging service group.
  struct UavRt {
    Uav a;
    Position pos;
    double power = 0.0;
    Phase phase = Phase::Offline;
    std::optional<Action> commit;
    bool locked = false;
    double travel = 0.0;
    double done_at = 0.0;        // execution / charging completion time
    double charge_started = 0.0;
    double charge_rate = 0.0;
    bool active = false;
    bool retired = false;
  };
  struct WorkerRt {
    Worker a;
    Position pos;
    Phase phase = Phase::Offline;
    std::optional<Action> commit;
    bool locked = false;
    double travel = 0.0;
    bool active = false;
    bool retired = false;
  };
  struct VehicleRt {
    Vehicle a;
    Position pos;
    Phase phase = Phase::Offline;
    std::optional<Action> commit;
    bool locked = false;
    double travel = 0.0;
    bool active = false;
    bool retired = false;
  };

  struct TaskPair {
    int uav = -1;
    int worker = -1;
    bool executing = false;
  };

  // One serving vehicle per charge point; UAVs wait in arrival order.
  struct Station {
    int vehicle = -1;
    std::vector<int> inbound;                     // locked UAVs still travelling
    std::deque<std::pair<double, int>> queue;     // (arrival time, uav id)
    int charging = -1;
    double last_started_arrival = -std::numeric_limits<double>::infinity();
  };

  Scenario scenario;
  SimConfig cfg;
  EpochObserver observer;

  std::vector<UavRt> uavs;
  std::vector<WorkerRt> workers;
  std::vector<VehicleRt> vehicles;
  std::vector<TaskPoint> tasks;
  std::vector<ChargePoint> charges;
  std::map<int, int> task_idx, charge_idx, uav_idx, worker_idx, vehicle_idx;

  std::map<int, TaskPair> owned;     // task id -> matched pair
  std::map<int, Station> stations;   // charge id -> service state

  double now = 0.0;
  int epoch = 0;
  int n_epochs = 0;
  int completed = 0;
  int epoch_completions = 0;
  bool stopped = false;
  std::mt19937_64 rng;
  MetricsLog log;
  std::ofstream trace;

  Impl(Scenario sc, SimConfig config, EpochObserver obs)
      : scenario(std::move(sc)), cfg(std::move(config)), observer(std::move(obs)) {
    uwv::validate(cfg);
    if (cfg.radius_override) {
      for (auto& u : scenario.uavs) u.radius = *cfg.radius_override;
      for (auto& w : scenario.workers) w.radius = *cfg.radius_override;
      for (auto& v : scenario.vehicles) v.radius = *cfg.radius_override;
    }
    uwv::validate(scenario);

    for (const auto& u : scenario.uavs) {
      UavRt rt;
      rt.a = u;
      rt.pos = u.loc;
      rt.power = u.power;
      uavs.push_back(std::move(rt));
    }
    for (const auto& w : scenario.workers) {
      WorkerRt rt;
      rt.a = w;
      rt.pos = w.loc;
      workers.push_back(std::move(rt));
    }
    for (const auto& v : scenario.vehicles) {
      VehicleRt rt;
      rt.a = v;
      rt.pos = v.loc;
      vehicles.push_back(std::move(rt));
    }
    tasks = scenario.tasks;
    charges = scenario.charges;
    for (std::size_t i = 0; i < uavs.size(); ++i) uav_idx[uavs[i].a.id] = i;
    for (std::size_t i = 0; i < workers.size(); ++i) worker_idx[workers[i].a.id] = i;
    for (std::size_t i = 0; i < vehicles.size(); ++i) vehicle_idx[vehicles[i].a.id] = i;
    for (std::size_t i = 0; i < tasks.size(); ++i) task_idx[tasks[i].id] = i;
    for (std::size_t i = 0; i < charges.size(); ++i) charge_idx[charges[i].id] = i;

    n_epochs = static_cast<int>(std::llround(cfg.limit_time / cfg.interval));
    rng.seed(cfg.seed);
    log.tasks_total = static_cast<int>(tasks.size());
    log.agents_total = static_cast<int>(uavs.size() + workers.size() + vehicles.size());
    if (!cfg.trace_path.empty()) {
      trace.open(cfg.trace_path);
      if (!trace) throw IoError("cannot open trace file " + cfg.trace_path);
    }
  }

  UavRt& uav(int id) { return uavs[uav_idx.at(id)]; }
  WorkerRt& worker(int id) { return workers[worker_idx.at(id)]; }
  VehicleRt& vehicle(int id) { return vehicles[vehicle_idx.at(id)]; }
  TaskPoint& task(int id) { return tasks[task_idx.at(id)]; }
  Position target_pos(const Action& act) {
    if (act.kind == ActionKind::GoToTask) return task(act.target).loc;
    return charges[charge_idx.at(act.target)].loc;
  }

  void emit_event(double t, const char* name, std::initializer_list<std::pair<const char*, int>> fields) {
    if (!trace.is_open()) return;
    nlohmann::ordered_json j{{"type", "event"}, {"t", t}, {"event", name}};
    for (const auto& [k, v] : fields) j[k] = v;
    trace << j.dump() << '\n';
  }

  void emit_states(double t) {
    if (!trace.is_open()) return;
    for (const auto& u : uavs) {
      if (!u.active) continue;
      nlohmann::ordered_json j{{"type", "state"},   {"t", t},
                               {"agent", to_string(AgentRef{AgentKind::Uav, u.a.id})},
                               {"x", u.pos.x},      {"y", u.pos.y},
                               {"power", observed_power(u, t)},
                               {"phase", to_string(u.phase)}};
      trace << j.dump() << '\n';
    }
    for (const auto& w : workers) {
      if (!w.active) continue;
      nlohmann::ordered_json j{{"type", "state"},
                               {"t", t},
                               {"agent", to_string(AgentRef{AgentKind::Worker, w.a.id})},
                               {"x", w.pos.x},
                               {"y", w.pos.y},
                               {"phase", to_string(w.phase)}};
      trace << j.dump() << '\n';
    }
    for (const auto& v : vehicles) {
      if (!v.active) continue;
      nlohmann::ordered_json j{{"type", "state"},
                               {"t", t},
                               {"agent", to_string(AgentRef{AgentKind::Vehicle, v.a.id})},
                               {"x", v.pos.x},
                               {"y", v.pos.y},
                               {"phase", to_string(v.phase)}};
      trace << j.dump() << '\n';
    }
  }

  // Power shown while charging accrues linearly; the stored field is only
  // settled on completion or abort.
  double observed_power(const UavRt& u, double t) const {
    if (u.phase != Phase::Charging) return u.power;
    return std::min(u.a.full_power, u.power + u.charge_rate * (t - u.charge_started));
  }

  // ---- presence ----------------------------------------------------------

  // Tick times accumulate floating error, so the half-open window check gets
  // a small tolerance: an instant within kEps of downtime counts as down.
  static bool covers_now(const OnlineWindow& w, double t) {
    return t >= w.uptime - kEps && t < w.downtime - kEps;
  }

  void process_presence(double t) {
    for (auto& u : uavs) {
      if (!u.retired && !u.active && covers_now(u.a.window, t)) {
        u.active = true;
        u.phase = Phase::Idle;
      } else if (u.active && !covers_now(u.a.window, t)) {
        retire_uav(u, t);
      }
    }
    for (auto& w : workers) {
      if (!w.retired && !w.active && covers_now(w.a.window, t)) {
        w.active = true;
        w.phase = Phase::Idle;
      } else if (w.active && !covers_now(w.a.window, t)) {
        retire_worker(w, t);
      }
    }
    for (auto& v : vehicles) {
      if (!v.retired && !v.active && covers_now(v.a.window, t)) {
        v.active = true;
        v.phase = Phase::Idle;
      } else if (v.active && !covers_now(v.a.window, t)) {
        retire_vehicle(v, t);
      }
    }
    // An agent whose whole window fell between two ticks never activates;
    // mark it retired so it is not revisited.
    for (auto& u : uavs)
      if (!u.retired && !u.active && t >= u.a.window.downtime - kEps) u.retired = true;
    for (auto& w : workers)
      if (!w.retired && !w.active && t >= w.a.window.downtime - kEps) w.retired = true;
    for (auto& v : vehicles)
      if (!v.retired && !v.active && t >= v.a.window.downtime - kEps) v.retired = true;
  }

  void release_uav(UavRt& u) {
    u.phase = u.active ? Phase::Idle : u.phase;
    u.commit.reset();
    u.locked = false;
  }
  void release_worker(WorkerRt& w) {
    w.phase = w.active ? Phase::Idle : w.phase;
    w.commit.reset();
    w.locked = false;
  }
  void release_vehicle(VehicleRt& v) {
    v.phase = v.active ? Phase::Idle : v.phase;
    v.commit.reset();
    v.locked = false;
  }

  // Aborts the pair owning `task_id`, releasing both members. The task
  // reverts to open with no partial credit.
  void abort_pair(int task_id) {
    auto it = owned.find(task_id);
    if (it == owned.end()) return;
    release_uav(uav(it->second.uav));
    release_worker(worker(it->second.worker));
    owned.erase(it);
  }

  void leave_station(int charge_id, int uav_id, double t) {
    auto it = stations.find(charge_id);
    if (it == stations.end()) return;
    Station& st = it->second;
    std::erase(st.inbound, uav_id);
    std::erase_if(st.queue, [&](const auto& q) { return q.second == uav_id; });
    if (st.charging == uav_id) {
      UavRt& u = uav(uav_id);
      u.power = std::min(u.a.full_power, u.power + u.charge_rate * (t - u.charge_started));
      st.charging = -1;
    }
    maybe_close_station(charge_id);
  }

  void maybe_close_station(int charge_id) {
    auto it = stations.find(charge_id);
    if (it == stations.end()) return;
    Station& st = it->second;
    if (st.charging == -1 && st.queue.empty() && st.inbound.empty()) {
      if (st.vehicle != -1) release_vehicle(vehicle(st.vehicle));
      stations.erase(it);
    }
  }

  void retire_uav(UavRt& u, double t) {
    if (u.commit) {
      if (u.commit->kind == ActionKind::GoToTask && u.locked) abort_pair(u.commit->target);
      if (u.commit->kind == ActionKind::GoToCharge && u.locked)
        leave_station(u.commit->target, u.a.id, t);
    }
    u.commit.reset();
    u.locked = false;
    u.active = false;
    u.retired = true;
    u.phase = Phase::Offline;
  }

  void retire_worker(WorkerRt& w, double t) {
    (void)t;
    if (w.commit && w.commit->kind == ActionKind::GoToTask && w.locked)
      abort_pair(w.commit->target);
    w.commit.reset();
    w.locked = false;
    w.active = false;
    w.retired = true;
    w.phase = Phase::Offline;
  }

  void retire_vehicle(VehicleRt& v, double t) {
    if (v.commit && v.commit->kind == ActionKind::GoToCharge) {
      int cid = v.commit->target;
      auto it = stations.find(cid);
      if (it != stations.end() && it->second.vehicle == v.a.id) {
        Station st = it->second;
        if (st.charging != -1) {
          UavRt& u = uav(st.charging);
          u.power = std::min(u.a.full_power, u.power + u.charge_rate * (t - u.charge_started));
          release_uav(u);
        }
        for (auto& [arr, uid] : st.queue) release_uav(uav(uid));
        for (int uid : st.inbound) release_uav(uav(uid));
        stations.erase(cid);
      }
    }
    v.commit.reset();
    v.locked = false;
    v.active = false;
    v.retired = true;
    v.phase = Phase::Offline;
  }

  // ---- snapshot / decision ----------------------------------------------

  WorldSnapshot make_snapshot() const {
    WorldSnapshot snap;
    snap.sys_time = now;
    snap.width = scenario.width;
    snap.height = scenario.height;
    for (const auto& u : uavs)
      if (u.active) {
        Uav e = u.a;
        e.loc = u.pos;
        e.power = u.power;
        snap.uavs.push_back(e);
      }
    for (const auto& w : workers)
      if (w.active) {
        Worker e = w.a;
        e.loc = w.pos;
        snap.workers.push_back(e);
      }
    for (const auto& v : vehicles)
      if (v.active) {
        Vehicle e = v.a;
        e.loc = v.pos;
        snap.vehicles.push_back(e);
      }
    for (const auto& t : tasks)
      if (!t.completed) snap.open_tasks.push_back(t);
    snap.charge_points = charges;
    return snap;
  }

  ActionMap locked_actions() const {
    ActionMap m;
    for (const auto& u : uavs)
      if (u.active && u.locked && u.commit) m[{AgentKind::Uav, u.a.id}] = *u.commit;
    for (const auto& w : workers)
      if (w.active && w.locked && w.commit) m[{AgentKind::Worker, w.a.id}] = *w.commit;
    for (const auto& v : vehicles)
      if (v.active && v.locked && v.commit) m[{AgentKind::Vehicle, v.a.id}] = *v.commit;
    return m;
  }

  JointAssignment dispatch(const WorldSnapshot& snap, const RoleMap& roles,
                           const ActionMap& locked) {
    SchedulerConfig scfg;
    scfg.max_rounds = cfg.max_rounds;
    scfg.role_partition = cfg.role_partition;
    switch (cfg.algorithm) {
      case Algorithm::Paln:
        return decide_epoch(snap, roles, locked, rng, scfg);
      case Algorithm::Raln:
        return raln_decide(snap, roles, locked, rng, scfg);
      case Algorithm::Greedy:
        return greedy_decide(snap, roles, locked);
      case Algorithm::Kwta:
        return kwta_decide(snap, roles, locked, cfg.kwta);
    }
    throw std::logic_error("unreachable algorithm branch");
  }

  void commit(const JointAssignment& assignment, EpochRecord& rec) {
    // Apply the fresh actions of unlocked agents.
    for (const auto& [ref, act] : assignment.actions) {
      switch (ref.kind) {
        case AgentKind::Uav: {
          auto it = uav_idx.find(ref.id);
          if (it == uav_idx.end()) break;
          UavRt& u = uavs[it->second];
          if (!u.active || u.locked) break;
          if (act.kind == ActionKind::Hold) {
            u.commit.reset();
            u.phase = Phase::Idle;
          } else {
            u.commit = act;
            u.phase = Phase::Travelling;
          }
          break;
        }
        case AgentKind::Worker: {
          auto it = worker_idx.find(ref.id);
          if (it == worker_idx.end()) break;
          WorkerRt& w = workers[it->second];
          if (!w.active || w.locked) break;
          if (act.kind == ActionKind::Hold) {
            w.commit.reset();
            w.phase = Phase::Idle;
          } else {
            w.commit = act;
            w.phase = Phase::Travelling;
          }
          break;
        }
        case AgentKind::Vehicle: {
          auto it = vehicle_idx.find(ref.id);
          if (it == vehicle_idx.end()) break;
          VehicleRt& v = vehicles[it->second];
          if (!v.active || v.locked) break;
          if (act.kind == ActionKind::Hold) {
            v.commit.reset();
            v.phase = Phase::Idle;
          } else {
            v.commit = act;
            v.phase = Phase::Travelling;
          }
          break;
        }
      }
    }

    // Form new task pairs: per unowned open task, the earliest-arriving UAV
    // and worker among this epoch's committers.
    std::map<int, std::vector<int>> task_uavs, task_workers;
    for (const auto& u : uavs)
      if (u.active && !u.locked && u.commit && u.commit->kind == ActionKind::GoToTask)
        task_uavs[u.commit->target].push_back(u.a.id);
    for (const auto& w : workers)
      if (w.active && !w.locked && w.commit && w.commit->kind == ActionKind::GoToTask)
        task_workers[w.commit->target].push_back(w.a.id);
    for (const auto& [tid, ulist] : task_uavs) {
      if (owned.contains(tid)) continue;
      auto wit = task_workers.find(tid);
      if (wit == task_workers.end()) continue;
      Position tp = task(tid).loc;
      auto best_uav = [&](int a, int b) {
        double ta = dis(uav(a).pos, tp) / uav(a).a.speed;
        double tb = dis(uav(b).pos, tp) / uav(b).a.speed;
        return ta < tb || (ta == tb && a < b) ? a : b;
      };
      auto best_worker = [&](int a, int b) {
        double ta = dis(worker(a).pos, tp) / worker(a).a.speed;
        double tb = dis(worker(b).pos, tp) / worker(b).a.speed;
        return ta < tb || (ta == tb && a < b) ? a : b;
      };
      int bu = ulist.front();
      for (int id : ulist) bu = best_uav(id, bu);
      int bw = wit->second.front();
      for (int id : wit->second) bw = best_worker(id, bw);
      owned[tid] = {bu, bw, false};
      uav(bu).locked = true;
      worker(bw).locked = true;
      ++rec.task_matches;
    }

    // Charging service groups: a charge point already being served accepts
    // every new inbound UAV; otherwise a point with both sides targeting it
    // opens with the earliest-arriving vehicle.
    std::map<int, std::vector<int>> cp_uavs, cp_vehicles;
    for (const auto& u : uavs)
      if (u.active && !u.locked && u.commit && u.commit->kind == ActionKind::GoToCharge)
        cp_uavs[u.commit->target].push_back(u.a.id);
    for (const auto& v : vehicles)
      if (v.active && !v.locked && v.commit && v.commit->kind == ActionKind::GoToCharge)
        cp_vehicles[v.commit->target].push_back(v.a.id);
    for (const auto& [cid, ulist] : cp_uavs) {
      auto stit = stations.find(cid);
      bool has_vehicle = stit != stations.end() && stit->second.vehicle != -1;
      if (!has_vehicle) {
        auto vit = cp_vehicles.find(cid);
        if (vit == cp_vehicles.end()) continue;
        Position cpp = charges[charge_idx.at(cid)].loc;
        int bv = vit->second.front();
        for (int id : vit->second) {
          double ta = dis(vehicle(id).pos, cpp) / vehicle(id).a.speed;
          double tb = dis(vehicle(bv).pos, cpp) / vehicle(bv).a.speed;
          if (ta < tb || (ta == tb && id < bv)) bv = id;
        }
        stations[cid].vehicle = bv;
        vehicle(bv).locked = true;
      }
      for (int uid : ulist) {
        uav(uid).locked = true;
        stations[cid].inbound.push_back(uid);
        ++rec.charge_matches;
      }
    }

    // Constraint replay: every UAV committed to a task must still satisfy
    // the reach-execute-return bound from its current state.
    for (const auto& u : uavs) {
      if (!u.active || !u.commit || u.commit->kind != ActionKind::GoToTask) continue;
      const TaskPoint& t = task(u.commit->target);
      if (t.completed) continue;
      double need = dis(u.pos, t.loc) + t.cost_power + nearest_charge_distance(t.loc, charges);
      if (need > u.power + 1e-6) ++log.feasibility_violations;
    }

    // Agents already standing at their target act immediately.
    for (auto& u : uavs)
      if (u.active && u.phase == Phase::Travelling && u.commit &&
          dis(u.pos, target_pos(*u.commit)) <= kEps)
        handle_uav_arrival(u, now);
    for (auto& w : workers)
      if (w.active && w.phase == Phase::Travelling && w.commit &&
          dis(w.pos, target_pos(*w.commit)) <= kEps)
        handle_worker_arrival(w);
    for (auto& v : vehicles)
      if (v.active && v.phase == Phase::Travelling && v.commit &&
          dis(v.pos, target_pos(*v.commit)) <= kEps)
        handle_vehicle_arrival(v);
    start_transitions(now);
  }

  // ---- arrivals and phase transitions -------------------------------------

  void handle_uav_arrival(UavRt& u, double t) {
    if (!u.commit) return;
    if (u.commit->kind == ActionKind::GoToCharge && u.locked) {
      u.phase = Phase::QueuedAtCharge;
      Station& st = stations[u.commit->target];
      std::erase(st.inbound, u.a.id);
      auto entry = std::make_pair(t, u.a.id);
      auto pos = std::upper_bound(st.queue.begin(), st.queue.end(), entry);
      st.queue.insert(pos, entry);
    } else if (u.commit->kind == ActionKind::GoToTask && u.locked) {
      // Waiting for the partner; execution starts in start_transitions.
    } else {
      release_uav(u);
    }
  }

  void handle_worker_arrival(WorkerRt& w) {
    if (!w.commit) return;
    if (!(w.commit->kind == ActionKind::GoToTask && w.locked)) release_worker(w);
  }

  void handle_vehicle_arrival(VehicleRt& v) {
    if (!v.commit) return;
    if (v.commit->kind == ActionKind::GoToCharge && v.locked) {
      v.phase = Phase::Charging;  // on duty at the point
    } else {
      release_vehicle(v);
    }
  }

  void start_charge(Station& st, int charge_id, double t) {
    auto [arrival, uid] = st.queue.front();
    st.queue.pop_front();
    if (arrival < st.last_started_arrival - kEps) ++log.fcfs_violations;
    st.last_started_arrival = std::max(st.last_started_arrival, arrival);
    UavRt& u = uav(uid);
    const VehicleRt& v = vehicle(st.vehicle);
    u.phase = Phase::Charging;
    u.charge_started = t;
    u.charge_rate = v.a.charge_power;
    u.done_at = t + (u.a.full_power - u.power) / v.a.charge_power;
    st.charging = uid;
    emit_event(t, "charge_started", {{"charge", charge_id}, {"uav", uid}, {"vehicle", st.vehicle}});
  }

  void start_transitions(double t) {
    for (auto& [tid, pair] : owned) {
      if (pair.executing) continue;
      UavRt& u = uav(pair.uav);
      WorkerRt& w = worker(pair.worker);
      const TaskPoint& tp = task(tid);
      if (tp.completed) continue;
      if (dis(u.pos, tp.loc) <= kEps && dis(w.pos, tp.loc) <= kEps) {
        pair.executing = true;
        u.phase = Phase::ExecutingTask;
        w.phase = Phase::ExecutingTask;
        u.done_at = t + tp.cost_power / u.a.speed;
        emit_event(t, "execution_started", {{"task", tid}, {"uav", pair.uav}, {"worker", pair.worker}});
      }
    }
    for (auto& [cid, st] : stations) {
      if (st.vehicle == -1) continue;
      const VehicleRt& v = vehicles[vehicle_idx.at(st.vehicle)];
      if (dis(v.pos, charges[charge_idx.at(cid)].loc) > kEps) continue;
      if (st.charging == -1 && !st.queue.empty()) start_charge(st, cid, t);
    }
  }

  void process_completions(double t_end) {
    // Task executions.
    std::vector<int> done;
    for (auto& [tid, pair] : owned)
      if (pair.executing && uav(pair.uav).done_at <= t_end + kEps) done.push_back(tid);
    for (int tid : done) {
      TaskPair pair = owned.at(tid);
      UavRt& u = uav(pair.uav);
      WorkerRt& w = worker(pair.worker);
      TaskPoint& tp = task(tid);
      double t_done = u.done_at;
      if (tp.completed) {
        ++log.double_completions;
        throw std::logic_error("task " + std::to_string(tid) + " completed twice");
      }
      tp.completed = true;
      u.power -= tp.cost_power;
      if (u.power < -kEps) {
        ++log.energy_violations;
        throw std::logic_error("uav " + std::to_string(u.a.id) + " power went negative");
      }
      u.power = std::max(0.0, u.power);
      release_uav(u);
      release_worker(w);
      owned.erase(tid);
      ++completed;
      ++epoch_completions;
      log.completions.push_back({tid, t_done, epoch});
      emit_event(t_done, "task_completed", {{"task", tid}, {"uav", pair.uav}, {"worker", pair.worker}});
      // Anyone else still heading for this task loses its target.
      for (auto& ou : uavs)
        if (ou.active && !ou.locked && ou.commit && ou.commit->kind == ActionKind::GoToTask &&
            ou.commit->target == tid)
          release_uav(ou);
      for (auto& ow : workers)
        if (ow.active && !ow.locked && ow.commit && ow.commit->kind == ActionKind::GoToTask &&
            ow.commit->target == tid)
          release_worker(ow);
    }

    // Charging, chained exactly so queue handovers keep precise times.
    std::vector<int> station_ids;
    for (const auto& [cid, st] : stations) station_ids.push_back(cid);
    for (int cid : station_ids) {
      auto it = stations.find(cid);
      if (it == stations.end()) continue;
      Station& st = it->second;
      while (st.charging != -1 && uav(st.charging).done_at <= t_end + kEps) {
        UavRt& u = uav(st.charging);
        double t_done = u.done_at;
        int uav_id = u.a.id;
        u.power = u.a.full_power;
        release_uav(u);
        emit_event(t_done, "charge_completed",
                   {{"charge", cid}, {"uav", uav_id}, {"vehicle", st.vehicle}});
        st.charging = -1;
        if (!st.queue.empty() && st.vehicle != -1) start_charge(st, cid, t_done);
      }
      maybe_close_station(cid);
    }
  }

  void move_travellers(double t0, double dt) {
    // Returns the exact arrival time when the target is reached this tick.
    auto step = [&](auto& agent, double speed) -> std::optional<double> {
      if (!agent.commit || agent.phase != Phase::Travelling) return std::nullopt;
      Position target = target_pos(*agent.commit);
      double remain = dis(agent.pos, target);
      double reach = speed * dt;
      if (remain <= reach + 1e-12) {
        agent.pos = target;
        agent.travel += remain;
        return t0 + (speed > 0 ? remain / speed : 0.0);
      }
      double f = reach / remain;
      agent.pos.x += (target.x - agent.pos.x) * f;
      agent.pos.y += (target.y - agent.pos.y) * f;
      agent.travel += reach;
      return std::nullopt;
    };

    for (auto& u : uavs) {
      if (!u.active) continue;
      double before = u.travel;
      auto arrived = step(u, u.a.speed);
      u.power -= u.travel - before;
      if (arrived) handle_uav_arrival(u, *arrived);
    }
    for (auto& w : workers) {
      if (!w.active) continue;
      if (step(w, w.a.speed)) handle_worker_arrival(w);
    }
    for (auto& v : vehicles) {
      if (!v.active) continue;
      if (step(v, v.a.speed)) handle_vehicle_arrival(v);
    }
  }

  void energy_audit() {
    for (const auto& u : uavs) {
      if (!u.active) continue;
      if (u.power < -kEps || u.power > u.a.full_power + kEps) {
        ++log.energy_violations;
        throw std::logic_error("uav " + std::to_string(u.a.id) +
                               " violated energy bounds: power=" + std::to_string(u.power));
      }
    }
  }

  void tick(double dt) {
    double t0 = now;
    double t1 = now + dt;
    process_presence(t0);
    process_completions(t1);
    move_travellers(t0, dt);
    start_transitions(t1);
    now = t1;
    energy_audit();
    emit_states(t1);
  }

  // ---- epoch loop ---------------------------------------------------------

  void decide_and_commit() {
    process_presence(now);
    WorldSnapshot snap = make_snapshot();
    RoleMap roles;
    if (cfg.role_partition || cfg.algorithm == Algorithm::Greedy ||
        cfg.algorithm == Algorithm::Kwta)
      for (const auto& u : uavs)
        if (u.active && !u.locked) roles[u.a.id] = assign_role(*snap.find_uav(u.a.id), snap);
    ActionMap locked = locked_actions();

    auto t0 = std::chrono::steady_clock::now();
    JointAssignment assignment = dispatch(snap, roles, locked);
    auto t1 = std::chrono::steady_clock::now();
    assignment.epoch = epoch;

    if (observer.on_decision) observer.on_decision(snap, roles, locked, assignment);

    EpochRecord rec;
    rec.epoch = epoch;
    rec.sys_time = now;
    rec.decision_seconds = std::chrono::duration<double>(t1 - t0).count();
    rec.online_agents =
        static_cast<int>(snap.uavs.size() + snap.workers.size() + snap.vehicles.size());
    rec.rounds_used = assignment.rounds_used;
    rec.converged = assignment.converged;
    rec.fallback_count = static_cast<int>(assignment.fallback_agents.size());
    if (rec.online_agents >= 2) rec.epsilon = coupling_strength(snap).epsilon;
    rec.gap = equilibrium_gap(assignment.actions, snap);

    commit(assignment, rec);
    epoch_completions = 0;
    log.epochs.push_back(rec);
  }

  void advance_interval() {
    double base = now;
    int steps = static_cast<int>(std::ceil(cfg.interval / cfg.tick - 1e-9));
    for (int s = 1; s <= steps; ++s) {
      double t_end = base + std::min(cfg.interval, s * cfg.tick);
      tick(t_end - now);
    }
    auto& rec = log.epochs.back();
    rec.completed_in_epoch = epoch_completions;
    rec.completed_total = completed;
  }

  void run_epoch() {
    now = epoch * cfg.interval;
    decide_and_commit();
    advance_interval();
    ++epoch;
    if (log.tasks_total > 0 && completed == log.tasks_total) stopped = true;
  }

  bool finished() const { return stopped || epoch >= n_epochs; }

  void finalize() {
    log.completed_tasks = completed;
    log.degenerate = log.tasks_total == 0;
    log.completion_rate =
        log.degenerate ? 0.0 : static_cast<double>(completed) / log.tasks_total;
    double travel = 0.0;
    for (const auto& u : uavs) travel += u.travel;
    for (const auto& w : workers) travel += w.travel;
    for (const auto& v : vehicles) travel += v.travel;
    log.total_travel_km = travel;
    log.mean_travel_km = log.agents_total > 0 ? travel / log.agents_total : 0.0;
    double dsum = 0.0, esum = 0.0;
    int edefined = 0;
    log.convergence_failures = 0;
    for (const auto& r : log.epochs) {
      dsum += r.decision_seconds;
      if (r.epsilon) {
        esum += *r.epsilon;
        ++edefined;
      }
      if (!r.converged) ++log.convergence_failures;
    }
    log.mean_decision_seconds = log.epochs.empty() ? 0.0 : dsum / log.epochs.size();
    log.mean_epsilon = edefined > 0 ? esum / edefined : 0.0;
  }
};

Simulation::Simulation(Scenario scenario, SimConfig config, EpochObserver observer)
    : impl_(std::make_unique<Impl>(std::move(scenario), std::move(config),
                                   std::move(observer))) {}

Simulation::~Simulation() = default;

MetricsLog Simulation::run() {
  if (impl_->trace.is_open()) impl_->emit_states(impl_->now);
  while (!impl_->finished()) impl_->run_epoch();
  impl_->finalize();
  return impl_->log;
}

void Simulation::run_epoch() { impl_->run_epoch(); }
void Simulation::decide_and_commit() {
  impl_->now = impl_->epoch * impl_->cfg.interval;
  impl_->decide_and_commit();
}
void Simulation::advance_tick(double dt) { impl_->tick(dt); }
double Simulation::now() const { return impl_->now; }
bool Simulation::finished() const { return impl_->finished(); }
const MetricsLog& Simulation::metrics() const { return impl_->log; }

std::vector<Simulation::AgentState> Simulation::agent_states() const {
  std::vector<AgentState> out;
  for (const auto& u : impl_->uavs)
    out.push_back({{AgentKind::Uav, u.a.id}, u.pos, u.phase, u.locked, u.commit,
                   impl_->observed_power(u, impl_->now), u.a.full_power, u.travel});
  for (const auto& w : impl_->workers)
    out.push_back({{AgentKind::Worker, w.a.id}, w.pos, w.phase, w.locked, w.commit, 0.0, 0.0,
                   w.travel});
  for (const auto& v : impl_->vehicles)
    out.push_back({{AgentKind::Vehicle, v.a.id}, v.pos, v.phase, v.locked, v.commit, 0.0, 0.0,
                   v.travel});
  return out;
}

bool Simulation::task_completed(int task_id) const {
  return impl_->task(task_id).completed;
}

MetricsLog run(const Scenario& scenario, const SimConfig& config, const EpochObserver& observer) {
  Simulation sim(scenario, config, observer);
  return sim.run();
}

}  // namespace uwv
