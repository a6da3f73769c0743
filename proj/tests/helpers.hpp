// Small builders shared across the test suites.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "schedge/model.hpp"

namespace helpers {

inline schedge::TaskSpec task(const std::string& id, const std::string& app_id,
                              std::vector<std::string> preds = {}, uint64_t load = 1) {
  schedge::TaskSpec t;
  t.task_id = id;
  t.app_id = app_id;
  t.compute_load = load;
  t.input_size_mb = 1;
  t.output_size_mb = 1;
  t.safety_level = 0;
  std::sort(preds.begin(), preds.end());
  t.predecessors = std::move(preds);
  return t;
}

inline schedge::ApplicationSpec app(const std::string& id, std::vector<schedge::TaskSpec> tasks,
                                    uint64_t deadline = 1000) {
  schedge::ApplicationSpec a;
  a.app_id = id;
  a.tasks = std::move(tasks);
  a.deadline_cycles = deadline;
  return a;
}

inline schedge::DeviceSpec device(const std::string& id, schedge::Tier tier, uint32_t cores,
                                  uint32_t speed, uint32_t queue_capacity,
                                  double battery_wh = 100.0, uint8_t safety = 3) {
  schedge::DeviceSpec d;
  d.device_id = id;
  d.tier = tier;
  d.cores.assign(cores, schedge::CoreState{speed, queue_capacity, {}, {}, 0});
  if (tier != schedge::Tier::Cloud) d.battery_wh = battery_wh;
  d.active_power_w = tier == schedge::Tier::MEC ? 8.0 : 2.0;
  d.idle_power_w = tier == schedge::Tier::MEC ? 0.8 : 0.2;
  d.safety_capability = safety;
  return d;
}

// A state with `tasks` delivered into the remaining ledger and the app
// registered; devices added as-is.
inline schedge::SimState state_with(const std::vector<schedge::ApplicationSpec>& apps,
                                    const std::vector<schedge::DeviceSpec>& devices) {
  schedge::SimState state;
  for (const auto& dev : devices) state.devices.emplace(dev.device_id, dev);
  for (const auto& a : apps) {
    state.register_app(a.app_id, a.tasks.size(), a.deadline_cycles, 0);
    for (const auto& t : a.tasks) state.deliver_task(t, 0);
  }
  return state;
}

// Unique scratch directory under the system temp dir.
class TempDir {
public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("schedge_test_" + tag + "_" + std::to_string(counter()++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

private:
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::filesystem::path path_;
};

} // namespace helpers
