// C API surface checks. Links only the shared library through schedge.h.

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "schedge.h"

namespace {

int failures = 0;

void expect(bool ok, const char* what) {
  if (!ok) {
    std::fprintf(stderr, "FAIL: %s\n", what);
    ++failures;
  }
}

std::filesystem::path scratch_dir(const char* tag) {
  auto dir = std::filesystem::temp_directory_path() / (std::string("schedge_capi_") + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::filesystem::path write_tiny_config(const std::filesystem::path& dir) {
  auto path = dir / "config.json";
  std::ofstream out(path);
  out << R"({
    "seed": 7,
    "generate": {"num_apps": 4, "tasks_per_app": [3, 6], "num_iot": 2, "num_mec": 1},
    "window": {"interval_cycles": 5, "max_tasks": 100, "max_apps": 10},
    "churn": {"enabled": false},
    "engine": {"total_cycles": 300},
    "scheduler": {"name": "greedy_eft", "agents": 2},
    "run": {"output_dir": ")"
      << (dir / "out").string() << R"("}
  })";
  return path;
}

} // namespace

int main() {
  char err[512] = {0};

  expect(std::strcmp(schedge_version(), "0.1.0") == 0, "version string");

  // Errors: missing config file maps to the IO exit code.
  int rc = schedge_run("/no/such/config.json", nullptr, 0, nullptr, err, sizeof(err));
  expect(rc == SCHEDGE_ERR_IO, "missing config -> SCHEDGE_ERR_IO");
  expect(err[0] != '\0', "error message populated");

  // Errors: bad config content maps to the config exit code.
  auto dir = scratch_dir("main");
  {
    std::ofstream bad(dir / "bad.json");
    bad << R"({"scheduler": {"name": "nope"}})";
  }
  rc = schedge_run((dir / "bad.json").string().c_str(), nullptr, 0, nullptr, err, sizeof(err));
  expect(rc == SCHEDGE_ERR_CONFIG, "unknown scheduler -> SCHEDGE_ERR_CONFIG");
  expect(std::strstr(err, "greedy_eft") != nullptr, "error lists valid scheduler names");

  auto config = write_tiny_config(dir);

  // generate
  auto workload_dir = dir / "workload";
  rc = schedge_generate(config.string().c_str(), nullptr, 0, workload_dir.string().c_str(), err,
                        sizeof(err));
  expect(rc == SCHEDGE_OK, "generate succeeds");
  expect(std::filesystem::exists(workload_dir / "applications.csv"), "applications.csv exists");
  expect(std::filesystem::exists(workload_dir / "tasks.csv"), "tasks.csv exists");
  expect(std::filesystem::exists(workload_dir / "devices.csv"), "devices.csv exists");
  expect(std::filesystem::exists(workload_dir / "manifest.txt"), "manifest.txt exists");

  // full run with summary
  schedge_run_summary summary = {};
  rc = schedge_run(config.string().c_str(), nullptr, 0, &summary, err, sizeof(err));
  expect(rc == SCHEDGE_OK, "run succeeds");
  expect(summary.apps_finished == 4, "all 4 apps finish");
  expect(summary.cycles_run > 0, "cycles were run");
  expect(summary.total_energy_wh > 0.0, "energy accounted");
  expect(std::filesystem::exists(dir / "out" / "cycles.csv"), "metrics exported");

  // stepping interface
  schedge_sim* sim = schedge_sim_create(config.string().c_str(), nullptr, 0, err, sizeof(err));
  expect(sim != nullptr, "sim_create succeeds");
  if (sim) {
    expect(schedge_sim_cycle(sim) == 0, "starts at cycle 0");
    expect(schedge_sim_fleet_size(sim) == 4, "fleet is 2 IoT + 1 MEC + Cloud");
    schedge_cycle_report report = {};
    rc = schedge_sim_step(sim, &report, err, sizeof(err));
    expect(rc == SCHEDGE_OK, "step succeeds");
    expect(report.cycle == 0, "first report is cycle 0");
    expect(report.tasks_delivered > 0, "cycle 0 delivers a window");
    expect(schedge_sim_cycle(sim) == 1, "cycle counter advanced");

    rc = schedge_sim_run(sim, &summary, err, sizeof(err));
    expect(rc == SCHEDGE_OK, "sim_run succeeds");
    expect(schedge_sim_done(sim) == 1, "sim done after run");
    expect(summary.apps_finished == 4, "stepped run finishes all apps");

    auto exported = dir / "stepped_metrics";
    rc = schedge_sim_export_metrics(sim, exported.string().c_str(), 0, err, sizeof(err));
    expect(rc == SCHEDGE_OK, "sim export succeeds");
    expect(std::filesystem::exists(exported / "apps.csv"), "stepped metrics exist");
    schedge_sim_destroy(sim);
  }

  // overrides through the C API
  const char* overrides[] = {"engine.total_cycles=5", "engine.exact_cycles=true"};
  sim = schedge_sim_create(config.string().c_str(), overrides, 2, err, sizeof(err));
  expect(sim != nullptr, "sim with overrides");
  if (sim) {
    rc = schedge_sim_run(sim, &summary, err, sizeof(err));
    expect(rc == SCHEDGE_OK, "short run succeeds");
    expect(summary.cycles_run == 5, "override limited the run to 5 cycles");
    schedge_sim_destroy(sim);
  }

  // sweep + plot-data
  const double probs[] = {0.0, 0.1};
  const char* sweep_overrides[] = {"generate.num_apps=0"};
  auto sweep_csv = dir / "sweep.csv";
  rc = schedge_sweep(config.string().c_str(), sweep_overrides, 1, probs, 2, 3, 200,
                     sweep_csv.string().c_str(), err, sizeof(err));
  expect(rc == SCHEDGE_OK, "sweep succeeds");
  expect(std::filesystem::exists(sweep_csv), "sweep csv written");

  const double bad_probs[] = {1.5};
  rc = schedge_sweep(config.string().c_str(), sweep_overrides, 1, bad_probs, 1, 2, 100,
                     sweep_csv.string().c_str(), err, sizeof(err));
  expect(rc == SCHEDGE_ERR_CONFIG, "probability > 1 -> SCHEDGE_ERR_CONFIG");

  auto series_csv = dir / "series.csv";
  rc = schedge_plot_data((dir / "out").string().c_str(), "memory_proxy",
                         series_csv.string().c_str(), err, sizeof(err));
  expect(rc == SCHEDGE_OK, "plot_data succeeds");
  expect(std::filesystem::exists(series_csv), "series csv written");

  rc = schedge_plot_data((dir / "out").string().c_str(), "nope", series_csv.string().c_str(),
                         err, sizeof(err));
  expect(rc == SCHEDGE_ERR_CONFIG, "unknown kind -> SCHEDGE_ERR_CONFIG");

  rc = schedge_plot_data((dir / "missing").string().c_str(), "churn",
                         series_csv.string().c_str(), err, sizeof(err));
  expect(rc == SCHEDGE_ERR_IO, "missing metrics dir -> SCHEDGE_ERR_IO");

  std::filesystem::remove_all(dir);
  if (failures) {
    std::fprintf(stderr, "%d C API check(s) failed\n", failures);
    return 1;
  }
  std::printf("capi: ok\n");
  return 0;
}
