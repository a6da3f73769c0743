/* schedge — C API for the schedge IoT edge scheduling simulator.
 *
 * All functions return a status code (SCHEDGE_OK on success); the nonzero
 * codes double as the CLI exit codes. When a call fails and `err` is
 * non-NULL, a NUL-terminated message is written into it (truncated to
 * err_cap). Configuration files are JSON; `overrides` entries take the form
 * "section.key=value" and are applied on top of the file.
 */
#ifndef SCHEDGE_H
#define SCHEDGE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define SCHEDGE_OK 0
#define SCHEDGE_ERR_INTERNAL 1
#define SCHEDGE_ERR_CONFIG 2
#define SCHEDGE_ERR_IO 3
#define SCHEDGE_ERR_INVARIANT 4

/* Opaque simulation handle. */
typedef struct schedge_sim schedge_sim;

typedef struct schedge_cycle_report {
  uint64_t cycle;
  uint64_t tasks_delivered;
  uint64_t tasks_scheduled;
  uint64_t tasks_rejected;
  uint64_t tasks_completed;
  uint64_t apps_completed;
  int churn_direction; /* 0 none, +1 device added, -1 device removed */
  double wall_time_s;
} schedge_cycle_report;

typedef struct schedge_run_summary {
  uint64_t cycles_run;
  uint64_t apps_finished;
  double mean_makespan_cycles;
  double total_energy_wh;
} schedge_run_summary;

const char* schedge_version(void);

/* Generate the configured workload and fleet into out_dir: applications.csv,
 * tasks.csv, devices.csv and manifest.txt. config_path may be NULL to use
 * built-in defaults. */
int schedge_generate(const char* config_path, const char* const* overrides, size_t n_overrides,
                     const char* out_dir, char* err, size_t err_cap);

/* Full simulation run per the config: builds the environment, steps until
 * done, writes metrics CSVs (and the event log when configured) into the
 * configured output directory. summary may be NULL. */
int schedge_run(const char* config_path, const char* const* overrides, size_t n_overrides,
                schedge_run_summary* summary, char* err, size_t err_cap);

/* Churn probability sweep: one run per (probability, seed), aggregated into a
 * CSV at out_path. num_seeds 0 defaults to 10; cycles 0 uses the config's
 * engine.total_cycles. */
int schedge_sweep(const char* config_path, const char* const* overrides, size_t n_overrides,
                  const double* probabilities, size_t n_probabilities, uint64_t num_seeds,
                  uint64_t cycles, const char* out_path, char* err, size_t err_cap);

/* Derive a plot-ready series CSV from an exported metrics directory. Kinds:
 * iteration_time, memory_proxy, churn, makespan_hist. */
int schedge_plot_data(const char* metrics_dir, const char* kind, const char* out_path, char* err,
                      size_t err_cap);

/* ------------------------------------------------------------------------
 * Stepping interface for embedding the simulator in other programs.
 * ------------------------------------------------------------------------ */

/* NULL on failure (message in err). */
schedge_sim* schedge_sim_create(const char* config_path, const char* const* overrides,
                                size_t n_overrides, char* err, size_t err_cap);

/* Runs one cycle; fails once the configured cycle budget is exhausted. */
int schedge_sim_step(schedge_sim* sim, schedge_cycle_report* report, char* err, size_t err_cap);

/* Steps until the run completes (no metrics export). */
int schedge_sim_run(schedge_sim* sim, schedge_run_summary* summary, char* err, size_t err_cap);

/* 1 when the run is complete, 0 otherwise. */
int schedge_sim_done(const schedge_sim* sim);

uint64_t schedge_sim_cycle(const schedge_sim* sim);
uint64_t schedge_sim_fleet_size(const schedge_sim* sim);

int schedge_sim_export_metrics(schedge_sim* sim, const char* dir, int include_wall_time,
                               char* err, size_t err_cap);

void schedge_sim_destroy(schedge_sim* sim);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SCHEDGE_H */
