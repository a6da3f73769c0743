#include "schedge/driver.hpp"

#include <cstdio>
#include <fstream>

#include "schedge/csv.hpp"
#include "schedge/error.hpp"

namespace schedge::driver {

GenerateResult generate_workload(const config::RunConfig& cfg,
                                 const std::filesystem::path& out_dir) {
  Rng rng(derive_seed(cfg.seed, rng_stream::datagen));
  auto apps = datagen::generate_applications(cfg.gen, rng);
  auto devices = datagen::generate_devices(cfg.gen, rng);

  GenerateResult result;
  result.manifest = datagen::export_csv(apps, devices, out_dir);
  result.manifest_txt = out_dir / "manifest.txt";

  std::ofstream out(result.manifest_txt);
  if (!out) throw io_error("cannot write " + result.manifest_txt.string());
  out << "seed=" << cfg.seed << '\n'
      << "applications=" << result.manifest.application_rows << '\n'
      << "tasks=" << result.manifest.task_rows << '\n'
      << "devices=" << result.manifest.device_rows << '\n';
  out.close();
  if (out.fail()) throw io_error("write failed: " + result.manifest_txt.string());
  return result;
}

std::unique_ptr<engine::Environment> build_environment(const config::RunConfig& cfg,
                                                       EventSink* sink) {
  if (cfg.workload_dir) {
    datagen::Workload workload = datagen::load_csv(*cfg.workload_dir);
    return std::make_unique<engine::Environment>(std::move(workload), cfg.gen, cfg.engine,
                                                 cfg.scheduler, sink);
  }
  return std::make_unique<engine::Environment>(cfg.gen, cfg.engine, cfg.scheduler, sink);
}

RunResult summarize(const engine::Environment& env, const std::filesystem::path& output_dir) {
  const auto& store = env.metrics_store();
  RunResult result;
  result.cycles_run = store.cycles().size();
  result.apps_finished = store.apps().size();
  if (!store.apps().empty()) {
    double total = 0;
    for (const auto& app : store.apps()) total += static_cast<double>(app.makespan_cycles);
    result.mean_makespan_cycles = total / static_cast<double>(store.apps().size());
  }
  result.total_energy_wh = metrics::energy_total(store);
  result.output_dir = output_dir;
  return result;
}

RunResult run_simulation(const config::RunConfig& cfg) {
  std::unique_ptr<FileEventSink> sink;
  if (cfg.event_log) sink = std::make_unique<FileEventSink>(*cfg.event_log);

  auto env = build_environment(cfg, sink.get());
  env->run();
  metrics::export_metrics(env->metrics_store(), cfg.output_dir, cfg.export_wall_time);
  return summarize(*env, cfg.output_dir);
}

std::string summary_line(const RunResult& result) {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "cycles=%llu apps_finished=%llu mean_makespan_cycles=%.3f total_energy_wh=%.6f",
                static_cast<unsigned long long>(result.cycles_run),
                static_cast<unsigned long long>(result.apps_finished),
                result.mean_makespan_cycles, result.total_energy_wh);
  return buf;
}

std::vector<churn::SweepRow> run_sweep(const config::RunConfig& cfg,
                                       const std::vector<double>& probabilities,
                                       uint64_t num_seeds, uint64_t cycles,
                                       const std::filesystem::path& out_path) {
  if (num_seeds == 0) throw config_error("sweep needs at least one seed");

  auto run_one = [&cfg](double p, uint64_t seed, uint64_t run_cycles) {
    config::RunConfig run_cfg = cfg;
    run_cfg.seed = seed;
    run_cfg.gen.seed = seed;
    run_cfg.engine.seed = seed;
    run_cfg.engine.total_cycles = run_cycles;
    run_cfg.engine.exact_cycles = true;
    run_cfg.engine.churn.enabled = true;
    run_cfg.engine.churn.event_probability = p;
    auto env = build_environment(run_cfg);
    env->run();
    const auto& history = env->churn_history();
    return churn::ChurnCounts{history.total_added, history.total_removed};
  };

  std::vector<uint64_t> seeds;
  seeds.reserve(num_seeds);
  for (uint64_t i = 0; i < num_seeds; ++i) seeds.push_back(cfg.seed + i);

  auto rows = churn::churn_sweep(run_one, probabilities, cycles, seeds);
  churn::write_sweep_csv(rows, out_path);
  return rows;
}

void write_plot_data(const std::filesystem::path& metrics_dir, const std::string& kind,
                     const std::filesystem::path& out_path) {
  if (!std::filesystem::is_directory(metrics_dir)) {
    throw io_error("metrics directory not found: " + metrics_dir.string());
  }
  metrics::MetricsStore store = metrics::load_metrics(metrics_dir);
  metrics::Series series = metrics::plot_data(store, kind);
  metrics::write_series(series, out_path);
}

} // namespace schedge::driver
