#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "schedge/datagen.hpp"
#include "schedge/engine.hpp"

namespace schedge::config {

// Everything a run needs, loaded from one JSON file. Sections: seed,
// generate, window, churn, engine, scheduler, run. Unknown keys are rejected.
struct RunConfig {
  uint64_t seed = 1;
  datagen::GenConfig gen;
  engine::EngineConfig engine;
  engine::SchedulerConfig scheduler;
  std::string output_dir = "out";
  std::optional<std::string> workload_dir; // load instead of generate
  std::optional<std::string> event_log;
  bool export_wall_time = false;
};

// Parses `path`, applies `overrides` ("dotted.key=value", values parsed as
// JSON with plain-string fallback), then the SCHEDGE_SEED environment
// variable. Validates every section and that referenced paths exist.
RunConfig load_run_config(const std::filesystem::path& path,
                          const std::vector<std::string>& overrides = {});

// Built-in defaults with overrides applied; used when no config file is given.
RunConfig default_run_config(const std::vector<std::string>& overrides = {});

} // namespace schedge::config
