#include "uwvsim.h"

#include <cstring>
#include <new>
#include <string>

#include "uwvsim/errors.hpp"
#include "uwvsim/scenario.hpp"
#include "uwvsim/simkernel.hpp"

struct uwvsim_scenario {
  uwv::Scenario scenario;
};

struct uwvsim_result {
  uwv::MetricsLog log;
};

namespace {

thread_local std::string g_last_error;

uwvsim_status fail(uwvsim_status status, const std::string& msg) {
  g_last_error = msg;
  return status;
}

template <class Fn>
uwvsim_status guard(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return UWVSIM_OK;
  } catch (const uwv::ParseError& e) {
    return fail(UWVSIM_ERR_PARSE, e.what());
  } catch (const uwv::IoError& e) {
    return fail(UWVSIM_ERR_IO, e.what());
  } catch (const uwv::ConstraintError& e) {
    return fail(UWVSIM_ERR_CONSTRAINT, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(UWVSIM_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(UWVSIM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(UWVSIM_ERR_INTERNAL, e.what());
  }
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* uwvsim_version(void) { return "0.1.0"; }

const char* uwvsim_status_name(uwvsim_status status) {
  switch (status) {
    case UWVSIM_OK: return "ok";
    case UWVSIM_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case UWVSIM_ERR_PARSE: return "parse_error";
    case UWVSIM_ERR_IO: return "io_error";
    case UWVSIM_ERR_CONSTRAINT: return "constraint_violation";
    case UWVSIM_ERR_INTERNAL: return "internal_error";
  }
  return "unknown";
}

const char* uwvsim_last_error(void) { return g_last_error.c_str(); }

uwvsim_status uwvsim_scenario_generate(const char* spec_json, uwvsim_scenario** out) {
  if (!out) return fail(UWVSIM_ERR_INVALID_ARGUMENT, "out pointer is null");
  *out = nullptr;
  return guard([&] {
    std::string text = spec_json && *spec_json ? spec_json : "{}";
    uwv::ScenarioSpec spec = uwv::spec_from_json(text);
    *out = new uwvsim_scenario{uwv::generate(spec)};
  });
}

uwvsim_status uwvsim_scenario_from_json(const char* json, uwvsim_scenario** out) {
  if (!out) return fail(UWVSIM_ERR_INVALID_ARGUMENT, "out pointer is null");
  *out = nullptr;
  if (!json) return fail(UWVSIM_ERR_INVALID_ARGUMENT, "json is null");
  return guard([&] { *out = new uwvsim_scenario{uwv::scenario_from_json(json)}; });
}

uwvsim_status uwvsim_scenario_load(const char* path, uwvsim_scenario** out) {
  if (!out) return fail(UWVSIM_ERR_INVALID_ARGUMENT, "out pointer is null");
  *out = nullptr;
  if (!path) return fail(UWVSIM_ERR_INVALID_ARGUMENT, "path is null");
  return guard([&] { *out = new uwvsim_scenario{uwv::load_scenario(path)}; });
}

uwvsim_status uwvsim_scenario_save(const uwvsim_scenario* scenario, const char* path) {
  if (!scenario || !path)
    return fail(UWVSIM_ERR_INVALID_ARGUMENT, "scenario and path must be non-null");
  return guard([&] { uwv::save_scenario(scenario->scenario, path); });
}

uwvsim_status uwvsim_scenario_to_json(const uwvsim_scenario* scenario, char** out_json) {
  if (!scenario || !out_json)
    return fail(UWVSIM_ERR_INVALID_ARGUMENT, "scenario and out_json must be non-null");
  *out_json = nullptr;
  return guard([&] { *out_json = copy_string(uwv::scenario_to_json(scenario->scenario)); });
}

uwvsim_status uwvsim_run(const uwvsim_scenario* scenario, const char* config_json,
                         uwvsim_result** out) {
  if (!scenario || !out)
    return fail(UWVSIM_ERR_INVALID_ARGUMENT, "scenario and out must be non-null");
  *out = nullptr;
  return guard([&] {
    std::string text = config_json && *config_json ? config_json : "{}";
    uwv::SimConfig cfg = uwv::sim_config_from_json(text);
    *out = new uwvsim_result{uwv::run(scenario->scenario, cfg)};
  });
}

uwvsim_status uwvsim_result_summary(const uwvsim_result* result, uwvsim_run_summary* out) {
  if (!result || !out)
    return fail(UWVSIM_ERR_INVALID_ARGUMENT, "result and out must be non-null");
  const uwv::MetricsLog& log = result->log;
  *out = uwvsim_run_summary{};
  out->tasks_total = log.tasks_total;
  out->tasks_completed = log.completed_tasks;
  out->degenerate = log.degenerate ? 1 : 0;
  out->completion_rate = log.completion_rate;
  out->mean_decision_seconds = log.mean_decision_seconds;
  out->mean_travel_km = log.mean_travel_km;
  out->mean_epsilon = log.mean_epsilon;
  out->epochs = static_cast<int>(log.epochs.size());
  out->convergence_failures = log.convergence_failures;
  out->energy_violations = log.energy_violations;
  out->double_completions = log.double_completions;
  out->fcfs_violations = log.fcfs_violations;
  g_last_error.clear();
  return UWVSIM_OK;
}

uwvsim_status uwvsim_result_metrics_json(const uwvsim_result* result, char** out_json) {
  if (!result || !out_json)
    return fail(UWVSIM_ERR_INVALID_ARGUMENT, "result and out_json must be non-null");
  *out_json = nullptr;
  return guard([&] { *out_json = copy_string(uwv::metrics_to_json(result->log)); });
}

void uwvsim_scenario_free(uwvsim_scenario* scenario) { delete scenario; }
void uwvsim_result_free(uwvsim_result* result) { delete result; }
void uwvsim_string_free(char* str) { delete[] str; }

}  // extern "C"
