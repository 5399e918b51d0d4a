#ifndef UWVSIM_H
#define UWVSIM_H

/* C interface to the uwvsim crowdsensing scheduling simulator.
 *
 * Scenarios and run results are opaque handles. Every function that can
 * fail returns a status code; uwvsim_last_error() describes the most recent
 * failure on the calling thread. Structured data crosses the boundary as
 * JSON text (schemas documented in the project README); strings returned
 * through char** are owned by the caller and released with
 * uwvsim_string_free().
 */

#include <stddef.h>

#if defined(_WIN32)
#if defined(UWVSIM_BUILD)
#define UWVSIM_API __declspec(dllexport)
#else
#define UWVSIM_API __declspec(dllimport)
#endif
#else
#define UWVSIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  UWVSIM_OK = 0,
  UWVSIM_ERR_INVALID_ARGUMENT = 1,
  UWVSIM_ERR_PARSE = 2,
  UWVSIM_ERR_IO = 3,
  UWVSIM_ERR_CONSTRAINT = 4,
  UWVSIM_ERR_INTERNAL = 5
} uwvsim_status;

typedef struct uwvsim_scenario uwvsim_scenario;
typedef struct uwvsim_result uwvsim_result;

typedef struct {
  int tasks_total;
  int tasks_completed;
  int degenerate; /* 1 when the scenario had no tasks */
  double completion_rate;
  double mean_decision_seconds;
  double mean_travel_km;
  double mean_epsilon;
  int epochs;
  int convergence_failures;
  int energy_violations;
  int double_completions;
  int fcfs_violations;
} uwvsim_run_summary;

UWVSIM_API const char *uwvsim_version(void);
UWVSIM_API const char *uwvsim_status_name(uwvsim_status status);

/* Message for the most recent failure on this thread; empty string if none. */
UWVSIM_API const char *uwvsim_last_error(void);

/* Scenario lifecycle. spec_json follows the ScenarioSpec schema; an empty
 * or "{}" spec generates the default configuration. */
UWVSIM_API uwvsim_status uwvsim_scenario_generate(const char *spec_json, uwvsim_scenario **out);
UWVSIM_API uwvsim_status uwvsim_scenario_from_json(const char *json, uwvsim_scenario **out);
UWVSIM_API uwvsim_status uwvsim_scenario_load(const char *path, uwvsim_scenario **out);
UWVSIM_API uwvsim_status uwvsim_scenario_save(const uwvsim_scenario *scenario, const char *path);
UWVSIM_API uwvsim_status uwvsim_scenario_to_json(const uwvsim_scenario *scenario, char **out_json);

/* Runs the simulation. config_json follows the SimConfig schema; an empty
 * or "{}" config runs paln with the default interval, limit and seed. */
UWVSIM_API uwvsim_status uwvsim_run(const uwvsim_scenario *scenario, const char *config_json,
                                    uwvsim_result **out);

UWVSIM_API uwvsim_status uwvsim_result_summary(const uwvsim_result *result,
                                               uwvsim_run_summary *out);
UWVSIM_API uwvsim_status uwvsim_result_metrics_json(const uwvsim_result *result, char **out_json);

UWVSIM_API void uwvsim_scenario_free(uwvsim_scenario *scenario);
UWVSIM_API void uwvsim_result_free(uwvsim_result *result);
UWVSIM_API void uwvsim_string_free(char *str);

#ifdef __cplusplus
}
#endif

#endif /* UWVSIM_H */
