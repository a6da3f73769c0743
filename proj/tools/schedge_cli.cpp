// Command-line front end for the schedge simulator. Talks to the core
// exclusively through the C API in schedge.h.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "schedge.h"

namespace {

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;
};

std::vector<const char*> override_ptrs(const std::vector<std::string>& overrides) {
  std::vector<const char*> ptrs;
  ptrs.reserve(overrides.size());
  for (const auto& o : overrides) ptrs.push_back(o.c_str());
  return ptrs;
}

const char* config_or_null(const CommonArgs& args) {
  return args.config_path.empty() ? nullptr : args.config_path.c_str();
}

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("-c,--config", args.config_path, "JSON config file (defaults when omitted)");
  cmd->add_option("--set", args.overrides,
                  "Override one config key, e.g. --set engine.total_cycles=500");
}

int fail(int code, const char* err) {
  std::fprintf(stderr, "error: %s\n", err);
  return code;
}

bool parse_probabilities(const std::string& csv, std::vector<double>& out) {
  size_t start = 0;
  while (start <= csv.size()) {
    size_t comma = csv.find(',', start);
    std::string item = csv.substr(start, comma == std::string::npos ? comma : comma - start);
    if (!item.empty()) {
      try {
        size_t used = 0;
        out.push_back(std::stod(item, &used));
        if (used != item.size()) return false;
      } catch (const std::exception&) {
        return false;
      }
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return !out.empty();
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"schedge: a cycle-accurate IoT edge task scheduling simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(schedge_version()));

  char err[1024] = {0};

  // generate
  CommonArgs gen_args;
  std::string gen_out = "workload";
  auto* gen_cmd = app.add_subcommand("generate", "Generate a workload and device fleet as CSV");
  add_common(gen_cmd, gen_args);
  gen_cmd->add_option("-o,--out", gen_out, "Output directory (default: workload)");

  // run
  CommonArgs run_args;
  std::string event_log;
  bool exact_cycles = false;
  bool timing = false;
  auto* run_cmd = app.add_subcommand("run", "Run a simulation and export metrics");
  add_common(run_cmd, run_args);
  run_cmd->add_option("--event-log", event_log, "Write the append-only event log to this path");
  run_cmd->add_flag("--exact-cycles", exact_cycles,
                    "Run all configured cycles even after the workload is exhausted");
  run_cmd->add_flag("--timing", timing, "Export measured per-cycle wall times in cycles.csv");

  // sweep
  CommonArgs sweep_args;
  std::string probabilities_csv = "0.01,0.05,0.1,0.15";
  uint64_t sweep_seeds = 10;
  uint64_t sweep_cycles = 0;
  std::string sweep_out = "sweep.csv";
  auto* sweep_cmd = app.add_subcommand("sweep", "Churn probability sweep across seeds");
  add_common(sweep_cmd, sweep_args);
  sweep_cmd->add_option("-p,--probabilities", probabilities_csv,
                        "Comma-separated churn probabilities");
  sweep_cmd->add_option("--seeds", sweep_seeds, "Number of seeds per probability");
  sweep_cmd->add_option("--cycles", sweep_cycles, "Cycles per run (0: engine.total_cycles)");
  sweep_cmd->add_option("-o,--out", sweep_out, "Output CSV path");

  // plot-data
  std::string plot_metrics_dir;
  std::string plot_kind;
  std::string plot_out;
  auto* plot_cmd = app.add_subcommand("plot-data", "Derive a plot-ready series from metrics");
  plot_cmd->add_option("metrics_dir", plot_metrics_dir, "Exported metrics directory")->required();
  plot_cmd
      ->add_option("kind", plot_kind,
                   "Series kind: iteration_time, memory_proxy, churn, makespan_hist")
      ->required();
  plot_cmd->add_option("out", plot_out, "Output CSV path")->required();

  CLI11_PARSE(app, argc, argv);

  if (gen_cmd->parsed()) {
    auto ptrs = override_ptrs(gen_args.overrides);
    int rc = schedge_generate(config_or_null(gen_args), ptrs.data(), ptrs.size(),
                              gen_out.c_str(), err, sizeof(err));
    if (rc != SCHEDGE_OK) return fail(rc, err);
    std::printf("wrote %s/{applications,tasks,devices}.csv + manifest.txt\n", gen_out.c_str());
    return 0;
  }

  if (run_cmd->parsed()) {
    if (!event_log.empty()) run_args.overrides.push_back("run.event_log=" + event_log);
    if (exact_cycles) run_args.overrides.push_back("engine.exact_cycles=true");
    if (timing) run_args.overrides.push_back("run.export_wall_time=true");
    auto ptrs = override_ptrs(run_args.overrides);
    schedge_run_summary summary = {};
    int rc = schedge_run(config_or_null(run_args), ptrs.data(), ptrs.size(), &summary, err,
                         sizeof(err));
    if (rc != SCHEDGE_OK) return fail(rc, err);
    std::printf("cycles=%llu apps_finished=%llu mean_makespan_cycles=%.3f total_energy_wh=%.6f\n",
                static_cast<unsigned long long>(summary.cycles_run),
                static_cast<unsigned long long>(summary.apps_finished),
                summary.mean_makespan_cycles, summary.total_energy_wh);
    return 0;
  }

  if (sweep_cmd->parsed()) {
    std::vector<double> probabilities;
    if (!parse_probabilities(probabilities_csv, probabilities)) {
      return fail(SCHEDGE_ERR_CONFIG, "could not parse --probabilities");
    }
    auto ptrs = override_ptrs(sweep_args.overrides);
    int rc = schedge_sweep(config_or_null(sweep_args), ptrs.data(), ptrs.size(),
                           probabilities.data(), probabilities.size(), sweep_seeds, sweep_cycles,
                           sweep_out.c_str(), err, sizeof(err));
    if (rc != SCHEDGE_OK) return fail(rc, err);
    std::printf("wrote %s (%zu probabilities x %llu seeds)\n", sweep_out.c_str(),
                probabilities.size(), static_cast<unsigned long long>(sweep_seeds));
    return 0;
  }

  if (plot_cmd->parsed()) {
    int rc = schedge_plot_data(plot_metrics_dir.c_str(), plot_kind.c_str(), plot_out.c_str(), err,
                               sizeof(err));
    if (rc != SCHEDGE_OK) return fail(rc, err);
    std::printf("wrote %s\n", plot_out.c_str());
    return 0;
  }

  return SCHEDGE_ERR_CONFIG;
}
