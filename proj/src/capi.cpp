#include "schedge.h"

#include <cstring>
#include <memory>
#include <string>
#include <vector>

#include "schedge/config.hpp"
#include "schedge/driver.hpp"
#include "schedge/error.hpp"

using namespace schedge;

extern "C" {

struct schedge_sim {
  config::RunConfig cfg;
  std::unique_ptr<FileEventSink> sink;
  std::unique_ptr<engine::Environment> env;
};

} // extern "C"

namespace {

void set_err(char* err, size_t err_cap, const char* message) {
  if (!err || err_cap == 0) return;
  std::strncpy(err, message, err_cap - 1);
  err[err_cap - 1] = '\0';
}

int code_of(const Error& e) { return static_cast<int>(e.code()); }

template <typename Fn>
int guarded(char* err, size_t err_cap, Fn&& fn) {
  try {
    fn();
    return SCHEDGE_OK;
  } catch (const Error& e) {
    set_err(err, err_cap, e.what());
    return code_of(e);
  } catch (const std::exception& e) {
    set_err(err, err_cap, e.what());
    return SCHEDGE_ERR_INTERNAL;
  }
}

std::vector<std::string> to_overrides(const char* const* overrides, size_t n) {
  std::vector<std::string> out;
  out.reserve(n);
  for (size_t i = 0; i < n; ++i) out.emplace_back(overrides[i]);
  return out;
}

config::RunConfig load(const char* config_path, const char* const* overrides, size_t n) {
  auto ov = to_overrides(overrides, n);
  if (config_path) return config::load_run_config(config_path, ov);
  return config::default_run_config(ov);
}

void fill_summary(const driver::RunResult& result, schedge_run_summary* summary) {
  if (!summary) return;
  summary->cycles_run = result.cycles_run;
  summary->apps_finished = result.apps_finished;
  summary->mean_makespan_cycles = result.mean_makespan_cycles;
  summary->total_energy_wh = result.total_energy_wh;
}

} // namespace

extern "C" {

const char* schedge_version(void) { return "0.1.0"; }

int schedge_generate(const char* config_path, const char* const* overrides, size_t n_overrides,
                     const char* out_dir, char* err, size_t err_cap) {
  return guarded(err, err_cap, [&] {
    if (!out_dir) throw config_error("out_dir is required");
    auto cfg = load(config_path, overrides, n_overrides);
    driver::generate_workload(cfg, out_dir);
  });
}

int schedge_run(const char* config_path, const char* const* overrides, size_t n_overrides,
                schedge_run_summary* summary, char* err, size_t err_cap) {
  return guarded(err, err_cap, [&] {
    auto cfg = load(config_path, overrides, n_overrides);
    fill_summary(driver::run_simulation(cfg), summary);
  });
}

int schedge_sweep(const char* config_path, const char* const* overrides, size_t n_overrides,
                  const double* probabilities, size_t n_probabilities, uint64_t num_seeds,
                  uint64_t cycles, const char* out_path, char* err, size_t err_cap) {
  return guarded(err, err_cap, [&] {
    if (!out_path) throw config_error("out_path is required");
    if (!probabilities || n_probabilities == 0)
      throw config_error("at least one probability is required");
    auto cfg = load(config_path, overrides, n_overrides);
    std::vector<double> probs(probabilities, probabilities + n_probabilities);
    if (num_seeds == 0) num_seeds = 10;
    if (cycles == 0) cycles = cfg.engine.total_cycles;
    driver::run_sweep(cfg, probs, num_seeds, cycles, out_path);
  });
}

int schedge_plot_data(const char* metrics_dir, const char* kind, const char* out_path, char* err,
                      size_t err_cap) {
  return guarded(err, err_cap, [&] {
    if (!metrics_dir || !kind || !out_path)
      throw config_error("metrics_dir, kind and out_path are required");
    driver::write_plot_data(metrics_dir, kind, out_path);
  });
}

schedge_sim* schedge_sim_create(const char* config_path, const char* const* overrides,
                                size_t n_overrides, char* err, size_t err_cap) {
  try {
    auto sim = std::make_unique<schedge_sim>();
    sim->cfg = load(config_path, overrides, n_overrides);
    if (sim->cfg.event_log) sim->sink = std::make_unique<FileEventSink>(*sim->cfg.event_log);
    sim->env = driver::build_environment(sim->cfg, sim->sink.get());
    return sim.release();
  } catch (const Error& e) {
    set_err(err, err_cap, e.what());
    return nullptr;
  } catch (const std::exception& e) {
    set_err(err, err_cap, e.what());
    return nullptr;
  }
}

int schedge_sim_step(schedge_sim* sim, schedge_cycle_report* report, char* err, size_t err_cap) {
  return guarded(err, err_cap, [&] {
    if (!sim) throw config_error("null sim handle");
    CycleReport r = sim->env->step();
    if (report) {
      report->cycle = r.cycle;
      report->tasks_delivered = r.tasks_delivered;
      report->tasks_scheduled = r.tasks_scheduled;
      report->tasks_rejected = r.tasks_rejected;
      report->tasks_completed = r.tasks_completed;
      report->apps_completed = r.apps_completed;
      report->churn_direction =
          !r.churn_event ? 0 : (r.churn_event->direction == churn::Direction::add ? 1 : -1);
      report->wall_time_s = r.wall_time_s;
    }
  });
}

int schedge_sim_run(schedge_sim* sim, schedge_run_summary* summary, char* err, size_t err_cap) {
  return guarded(err, err_cap, [&] {
    if (!sim) throw config_error("null sim handle");
    sim->env->run();
    fill_summary(driver::summarize(*sim->env, sim->cfg.output_dir), summary);
  });
}

int schedge_sim_done(const schedge_sim* sim) { return sim && sim->env->done() ? 1 : 0; }

uint64_t schedge_sim_cycle(const schedge_sim* sim) {
  return sim ? sim->env->state().cycle : 0;
}

uint64_t schedge_sim_fleet_size(const schedge_sim* sim) {
  return sim ? sim->env->state().devices.size() : 0;
}

int schedge_sim_export_metrics(schedge_sim* sim, const char* dir, int include_wall_time,
                               char* err, size_t err_cap) {
  return guarded(err, err_cap, [&] {
    if (!sim) throw config_error("null sim handle");
    if (!dir) throw config_error("dir is required");
    metrics::export_metrics(sim->env->metrics_store(), dir, include_wall_time != 0);
  });
}

void schedge_sim_destroy(schedge_sim* sim) { delete sim; }

} // extern "C"
