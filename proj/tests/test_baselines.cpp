#include <stdexcept>
#include <random>
#include <set>

#include "doctest.h"
#include "micro.hpp"
#include "oracle.hpp"
#include "uwvsim/baselines.hpp"
#include "uwvsim/scenario.hpp"

using namespace uwv;

namespace {

WorldSnapshot clique_snapshot() {
  WorldSnapshot snap;
  snap.sys_time = 0.0;
  snap.width = snap.height = 50.0;
  return snap;
}

Uav make_uav(int id, Position p, double power = 30.0) {
  return {id, p, 1.0, 30.0, power, 100.0, {0.0, 60.0}};
}
Worker make_worker(int id, Position p) { return {id, p, 0.5, 100.0, {0.0, 60.0}}; }
Vehicle make_vehicle(int id, Position p) { return {id, p, 0.8, 100.0, 10.0, {0.0, 60.0}}; }

RoleMap roles_of(const WorldSnapshot& snap) {
  RoleMap roles;
  for (const auto& u : snap.uavs) roles[u.id] = assign_role(u, snap);
  return roles;
}

// Matched (task, uav, worker) triples implied by an action profile; when a
// point is piled on, the minimum-distance agent represents its side.
std::set<std::tuple<int, int, int>> matched_triples(const JointAssignment& a,
                                                    const WorldSnapshot& snap) {
  std::map<int, std::set<int>> us, ws;
  for (const auto& [ref, act] : a.actions) {
    if (act.kind != ActionKind::GoToTask) continue;
    if (ref.kind == AgentKind::Uav) us[act.target].insert(ref.id);
    if (ref.kind == AgentKind::Worker) ws[act.target].insert(ref.id);
  }
  std::set<std::tuple<int, int, int>> out;
  for (const auto& [tid, uset] : us) {
    if (!ws.contains(tid)) continue;
    Position tp = snap.find_task(tid)->loc;
    auto best = [&](const std::set<int>& ids, AgentKind kind) {
      int win = *ids.begin();
      double win_d = dis(*snap.agent_position({kind, win}), tp);
      for (int id : ids) {
        double d = dis(*snap.agent_position({kind, id}), tp);
        if (d < win_d) {
          win = id;
          win_d = d;
        }
      }
      return win;
    };
    out.insert({tid, best(uset, AgentKind::Uav), best(ws[tid], AgentKind::Worker)});
  }
  return out;
}

}  // namespace

TEST_CASE("greedy matches the lone triple") {
  auto snap = clique_snapshot();
  snap.uavs.push_back(make_uav(0, {0, 0}));
  snap.workers.push_back(make_worker(0, {1, 0}));
  snap.open_tasks.push_back({0, {2, 0}, 3.0, false});
  snap.charge_points.push_back({0, {2, 0}});

  auto a = greedy_decide(snap, roles_of(snap), {});
  CHECK(a.actions.at({AgentKind::Uav, 0}) == Action{ActionKind::GoToTask, 0});
  CHECK(a.actions.at({AgentKind::Worker, 0}) == Action{ActionKind::GoToTask, 0});
  CHECK(a.converged);
}

TEST_CASE("greedy contention: the closer worker wins, the loser holds") {
  auto snap = clique_snapshot();
  snap.uavs.push_back(make_uav(0, {0, 0}));
  snap.workers.push_back(make_worker(0, {2, 0}));
  snap.workers.push_back(make_worker(1, {5, 0}));
  snap.open_tasks.push_back({0, {0, 0}, 3.0, false});
  snap.charge_points.push_back({0, {0, 0}});

  auto a = greedy_decide(snap, roles_of(snap), {});
  CHECK(a.actions.at({AgentKind::Worker, 0}) == Action{ActionKind::GoToTask, 0});
  CHECK(a.actions.at({AgentKind::Worker, 1}) == Action{ActionKind::Hold, -1});
}

TEST_CASE("greedy uav still targets its nearest task without any worker") {
  auto snap = clique_snapshot();
  Uav u = make_uav(0, {0, 0});
  u.radius = 10.0;
  snap.uavs.push_back(u);
  snap.open_tasks.push_back({0, {3, 0}, 3.0, false});
  snap.charge_points.push_back({0, {3, 0}});
  snap.workers.push_back(make_worker(0, {40, 0}));  // far outside every range
  snap.workers.back().radius = 5.0;

  auto a = greedy_decide(snap, roles_of(snap), {});
  CHECK(a.actions.at({AgentKind::Uav, 0}) == Action{ActionKind::GoToTask, 0});
  CHECK(matched_triples(a, snap).empty());
}

TEST_CASE("greedy charge pairing mirrors the task side") {
  auto snap = clique_snapshot();
  snap.uavs.push_back(make_uav(0, {0, 0}, 10.0));
  snap.uavs.push_back(make_uav(1, {1, 0}, 12.0));
  snap.vehicles.push_back(make_vehicle(0, {2, 0}));
  snap.charge_points.push_back({0, {0.5, 0}});
  // No tasks: both uavs become charge seekers, the closer one wins the point.
  auto a = greedy_decide(snap, roles_of(snap), {});
  CHECK(a.actions.at({AgentKind::Uav, 0}) == Action{ActionKind::GoToCharge, 0});
  CHECK(a.actions.at({AgentKind::Uav, 1}) == Action{ActionKind::Hold, -1});
  CHECK(a.actions.at({AgentKind::Vehicle, 0}) == Action{ActionKind::GoToCharge, 0});
}

TEST_CASE("kwta matches on the top-k intersection") {
  auto snap = clique_snapshot();
  // uav top-2 is {t0, t1}; worker top-2 is {t1, t2}; the match is t1.
  snap.uavs.push_back(make_uav(0, {0, 0}));
  snap.open_tasks.push_back({0, {1, 0}, 3.0, false});
  snap.open_tasks.push_back({1, {2, 0}, 3.0, false});
  snap.open_tasks.push_back({2, {3, 0}, 3.0, false});
  snap.charge_points.push_back({0, {1, 0}});
  snap.workers.push_back(make_worker(0, {3.5, 0}));

  auto a = kwta_decide(snap, roles_of(snap), {}, {2, 2});
  CHECK(a.actions.at({AgentKind::Uav, 0}) == Action{ActionKind::GoToTask, 1});
  CHECK(a.actions.at({AgentKind::Worker, 0}) == Action{ActionKind::GoToTask, 1});
}

TEST_CASE("kwta falls back to best-score sequential attempts") {
  auto snap = clique_snapshot();
  // Disjoint top-1 sets: uav keeps t0, worker keeps t3; no intersection, so
  // each claims its own best point.
  snap.uavs.push_back(make_uav(0, {0, 0}));
  snap.open_tasks.push_back({0, {1, 0}, 3.0, false});
  snap.open_tasks.push_back({3, {10, 0}, 3.0, false});
  snap.charge_points.push_back({0, {1, 0}});
  snap.workers.push_back(make_worker(0, {11, 0}));

  auto a = kwta_decide(snap, roles_of(snap), {}, {1, 1});
  CHECK(a.actions.at({AgentKind::Uav, 0}) == Action{ActionKind::GoToTask, 0});
  CHECK(a.actions.at({AgentKind::Worker, 0}) == Action{ActionKind::GoToTask, 3});
}

TEST_CASE("kwta rejects non-positive retention counts") {
  auto snap = clique_snapshot();
  CHECK_THROWS_AS(kwta_decide(snap, {}, {}, {0, 1}), std::invalid_argument);
}

TEST_CASE("kwta with k=1 reproduces greedy pairings") {
  std::mt19937_64 gen(555);
  for (int trial = 0; trial < 40; ++trial) {
    auto scenario = micro::make(gen);
    auto snap = snapshot_of(scenario, 0.0);
    auto roles = roles_of(snap);
    auto g = greedy_decide(snap, roles, {});
    auto k = kwta_decide(snap, roles, {}, {1, 1});
    CHECK(matched_triples(g, snap) == matched_triples(k, snap));
  }
}

TEST_CASE("raln matches paln on symmetric candidates, differs on skewed ones") {
  auto snap = clique_snapshot();
  snap.workers.push_back(make_worker(0, {0, 0}));
  snap.open_tasks.push_back({0, {1, 0}, 3.0, false});
  snap.open_tasks.push_back({1, {2, 0}, 3.0, false});
  auto set = candidate_actions({AgentKind::Worker, 0}, nullptr, snap);

  std::mt19937_64 rng(8);
  int uniform_first = 0, softmax_first = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    if (sample_action_uniform(set, rng).target == 0) ++uniform_first;
    if (sample_action(set, rng).target == 0) ++softmax_first;
  }
  CHECK(std::abs(uniform_first / double(n) - 0.5) < 0.01);
  CHECK(std::abs(softmax_first / double(n) - 0.7310585786) < 0.01);
}

TEST_CASE("baselines only emit feasible actions") {
  std::mt19937_64 gen(77);
  micro::Options opt;
  opt.low_power_uavs = true;
  opt.max_vehicles = 1;
  for (int trial = 0; trial < 30; ++trial) {
    auto scenario = micro::make(gen, opt);
    auto snap = snapshot_of(scenario, 0.0);
    auto roles = roles_of(snap);
    for (const auto& assignment :
         {greedy_decide(snap, roles, {}), kwta_decide(snap, roles, {}, {3, 3})}) {
      for (const auto& [ref, act] : assignment.actions) {
        if (act.kind == ActionKind::Hold) continue;
        if (ref.kind == AgentKind::Uav) {
          const Uav* u = snap.find_uav(ref.id);
          if (act.kind == ActionKind::GoToTask) {
            const TaskPoint* t = snap.find_task(act.target);
            REQUIRE(t != nullptr);
            CHECK(in_range(*u, t->loc));
            CHECK(feasible_task(*u, *t, snap.charge_points));
          } else {
            const ChargePoint* cp = snap.find_charge(act.target);
            REQUIRE(cp != nullptr);
            CHECK(in_range(*u, cp->loc));
            CHECK(feasible_charge(*u, *cp));
          }
        }
        if (ref.kind == AgentKind::Worker) CHECK(act.kind == ActionKind::GoToTask);
        if (ref.kind == AgentKind::Vehicle) CHECK(act.kind == ActionKind::GoToCharge);
      }
    }
  }
}

TEST_CASE("greedy and kwta are deterministic") {
  std::mt19937_64 gen(31);
  auto scenario = micro::make(gen);
  auto snap = snapshot_of(scenario, 0.0);
  auto roles = roles_of(snap);
  auto g1 = greedy_decide(snap, roles, {});
  auto g2 = greedy_decide(snap, roles, {});
  CHECK(g1.actions == g2.actions);
  auto k1 = kwta_decide(snap, roles, {}, {3, 3});
  auto k2 = kwta_decide(snap, roles, {}, {3, 3});
  CHECK(k1.actions == k2.actions);
}

TEST_CASE("raln converged assignments pass the certificate") {
  std::mt19937_64 gen(404);
  int converged = 0;
  for (int trial = 0; trial < 40; ++trial) {
    auto scenario = micro::make(gen);
    auto snap = snapshot_of(scenario, 0.0);
    auto roles = roles_of(snap);
    std::mt19937_64 rng(trial);
    auto a = raln_decide(snap, roles, {}, rng, {});
    if (!a.converged) continue;
    ++converged;
    CHECK(verify_local_nash(a, snap, roles, {}));
  }
  CHECK(converged >= 20);
}

TEST_CASE("greedy never beats the enumerated optimum") {
  std::mt19937_64 gen(112);
  for (int trial = 0; trial < 30; ++trial) {
    auto scenario = micro::make(gen);
    auto snap = snapshot_of(scenario, 0.0);
    auto roles = roles_of(snap);
    auto game = oracle::build_game(snap, roles);
    if (oracle::profile_count(game) > 100000) continue;
    auto g = greedy_decide(snap, roles, {});
    oracle::Profile prof;
    for (const auto& a : game.agents) prof.push_back(g.actions.at(a.ref));
    CHECK(oracle::global_matches(game, prof) <= oracle::max_matches(game));
  }
}
