#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "schedge/config.hpp"
#include "schedge/engine.hpp"

namespace schedge::driver {

struct GenerateResult {
  datagen::FileManifest manifest;
  std::filesystem::path manifest_txt;
};

// Generates the configured workload and fleet into out_dir (three CSVs plus
// manifest.txt with the seed and row counts).
GenerateResult generate_workload(const config::RunConfig& cfg,
                                 const std::filesystem::path& out_dir);

// Builds an Environment per the config: loads the workload from
// cfg.workload_dir when set, generates it otherwise.
std::unique_ptr<engine::Environment> build_environment(const config::RunConfig& cfg,
                                                       EventSink* sink = nullptr);

struct RunResult {
  uint64_t cycles_run = 0;
  uint64_t apps_finished = 0;
  double mean_makespan_cycles = 0.0;
  double total_energy_wh = 0.0;
  std::filesystem::path output_dir;
};

// Full run: build, step until done, export metrics (and the event log when
// configured) into cfg.output_dir.
RunResult run_simulation(const config::RunConfig& cfg);

RunResult summarize(const engine::Environment& env, const std::filesystem::path& output_dir);

// One-line run summary, stable for scripting.
std::string summary_line(const RunResult& result);

// Churn probability sweep: runs the configured engine per (probability, seed)
// and writes the aggregate CSV to out_path. Seeds are cfg.seed .. cfg.seed +
// num_seeds - 1; cycles defaults to cfg.engine.total_cycles.
std::vector<churn::SweepRow> run_sweep(const config::RunConfig& cfg,
                                       const std::vector<double>& probabilities,
                                       uint64_t num_seeds, uint64_t cycles,
                                       const std::filesystem::path& out_path);

// plot-data subcommand: loads an exported metrics directory and writes the
// requested series CSV.
void write_plot_data(const std::filesystem::path& metrics_dir, const std::string& kind,
                     const std::filesystem::path& out_path);

} // namespace schedge::driver
