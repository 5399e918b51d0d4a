#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "uwvsim/baselines.hpp"
#include "uwvsim/coupling.hpp"
#include "uwvsim/scenario.hpp"
#include "uwvsim/scheduler.hpp"

// Discrete-time world evolution. Decisions are committed at every Interval
// boundary; movement, rendezvous, task execution, and FCFS charging advance
// in fine-grained ticks in between. Matched pairs and serving vehicles are
// locked until their commitment completes or aborts; everyone else re-enters
// the game at the next epoch.

namespace uwv {

enum class Algorithm { Paln, Raln, Greedy, Kwta };

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& name);

struct SimConfig {
  Algorithm algorithm = Algorithm::Paln;
  double interval = 5.0;    // min between decisions
  double limit_time = 180.0;
  double tick = 0.1;        // movement integration step, min
  int max_rounds = 200;
  std::uint64_t seed = 0;
  KwtaConfig kwta;
  std::optional<double> radius_override;  // applied to every agent
  bool role_partition = true;
  std::string trace_path;  // per-tick JSONL stream; empty disables
};

void validate(const SimConfig& cfg);
std::string sim_config_to_json(const SimConfig& cfg);
SimConfig sim_config_from_json(const std::string& json);

enum class Phase { Offline, Idle, Travelling, ExecutingTask, QueuedAtCharge, Charging };
const char* to_string(Phase p);

struct EpochRecord {
  int epoch = 0;
  double sys_time = 0.0;
  double decision_seconds = 0.0;
  int online_agents = 0;
  int task_matches = 0;    // pairs locked at this commit
  int charge_matches = 0;  // UAVs locked onto charging at this commit
  int completed_in_epoch = 0;
  int completed_total = 0;
  std::optional<double> epsilon;  // absent with fewer than two online agents
  GapReport gap;
  int rounds_used = 0;
  bool converged = true;
  int fallback_count = 0;
};

struct CompletionEvent {
  int task_id = 0;
  double time = 0.0;
  int epoch = 0;
};

struct MetricsLog {
  std::vector<EpochRecord> epochs;
  std::vector<CompletionEvent> completions;
  int tasks_total = 0;
  int completed_tasks = 0;
  bool degenerate = false;  // scenario had no tasks
  double completion_rate = 0.0;
  int agents_total = 0;
  double total_travel_km = 0.0;
  double mean_travel_km = 0.0;
  double mean_decision_seconds = 0.0;
  double mean_epsilon = 0.0;  // over epochs where defined
  int convergence_failures = 0;
  // Conservation audits; all zero on a healthy run.
  int energy_violations = 0;
  int double_completions = 0;
  int fcfs_violations = 0;
  int feasibility_violations = 0;
};

std::string metrics_to_json(const MetricsLog& log);

// Invoked after each decision, before it is committed to the world.
struct EpochObserver {
  std::function<void(const WorldSnapshot&, const RoleMap&, const ActionMap& locked,
                     const JointAssignment&)>
      on_decision;
};

class Simulation {
 public:
  Simulation(Scenario scenario, SimConfig config, EpochObserver observer = {});
  ~Simulation();
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  // Runs all remaining epochs and returns the final log.
  MetricsLog run();

  // Stepwise interface. run_epoch performs decide_and_commit and then
  // advances one full interval; the finer calls exist for tests.
  void run_epoch();
  void decide_and_commit();
  void advance_tick(double dt);

  double now() const;
  bool finished() const;
  const MetricsLog& metrics() const;

  struct AgentState {
    AgentRef ref;
    Position pos;
    Phase phase = Phase::Offline;
    bool locked = false;
    std::optional<Action> commitment;
    double power = 0.0;      // UAVs: includes linear accrual while charging
    double full_power = 0.0;
    double travel_km = 0.0;
  };
  std::vector<AgentState> agent_states() const;
  bool task_completed(int task_id) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

MetricsLog run(const Scenario& scenario, const SimConfig& config,
               const EpochObserver& observer = {});

}  // namespace uwv
