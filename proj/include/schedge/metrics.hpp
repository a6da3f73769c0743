#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "schedge/model.hpp"
#include "schedge/report.hpp"

namespace schedge::metrics {

struct CycleRecord {
  CycleReport report;
  uint64_t fleet_size = 0;
  double total_battery_wh = 0.0;
  uint64_t live_objects = 0; // |remaining| + |running| at end of cycle
};

struct AppRecord {
  std::string app_id;
  uint64_t arrival_cycle = 0; // first delivery
  uint64_t completion_cycle = 0;
  uint64_t makespan_cycles = 0;
  bool deadline_met = true;
};

struct DeviceRecord {
  std::string device_id;
  Tier tier = Tier::IoT;
  double energy_wh = 0.0;
  uint64_t joined_cycle = 0;
  std::optional<uint64_t> removed_cycle;
};

// Append-only run telemetry. Single writer (the engine thread); snapshot by
// copy for live reporting.
class MetricsStore {
public:
  const std::vector<CycleRecord>& cycles() const { return cycles_; }
  const std::vector<AppRecord>& apps() const { return apps_; }
  const std::map<std::string, DeviceRecord>& devices() const { return devices_; }

  void register_device(const std::string& id, Tier tier, uint64_t joined_cycle);
  void mark_device_removed(const std::string& id, uint64_t cycle);
  void add_device_energy(const std::string& id, double wh);
  void record_app(AppRecord record);

  const AppRecord* find_app(const std::string& app_id) const;

private:
  friend void record_cycle(MetricsStore&, const CycleReport&, const SimState&);
  friend MetricsStore load_metrics(const std::filesystem::path&);

  std::vector<CycleRecord> cycles_;
  std::vector<AppRecord> apps_;
  std::unordered_map<std::string, size_t> app_index_;
  std::map<std::string, DeviceRecord> devices_;
};

// Appends one per-cycle record; report cycles must be strictly increasing
// (Error(Errc::invariant) otherwise).
void record_cycle(MetricsStore& store, const CycleReport& report, const SimState& state);

// completion_cycle - first_delivery_cycle; Error(Errc::config) if unfinished.
uint64_t makespan(const MetricsStore& store, const std::string& app_id);

// Accumulated energy meter for one device (Error(Errc::config) if unknown).
double energy_total(const MetricsStore& store, const std::string& device_id);
// Fleet-wide total.
double energy_total(const MetricsStore& store);

inline constexpr const char* kCyclesHeader =
    "cycle,delivered,scheduled,rejected,completed,apps_completed,fleet_size,total_battery_wh,"
    "wall_time_s";
inline constexpr const char* kAppsHeader =
    "app_id,arrival_cycle,completion_cycle,makespan_cycles,deadline_met";
inline constexpr const char* kDevicesMetricsHeader = "device_id,tier,energy_wh,lifetime_cycles";

struct MetricsManifest {
  std::filesystem::path cycles_csv;
  std::filesystem::path apps_csv;
  std::filesystem::path devices_csv;
};

// Writes cycles.csv, apps.csv and devices.csv. Wall times are exported as 0
// unless include_wall_time is set, keeping default exports bit-reproducible
// across identically seeded runs.
MetricsManifest export_metrics(const MetricsStore& store, const std::filesystem::path& dir,
                               bool include_wall_time = false);

// Rebuilds cycle and app records from an exported metrics directory (live
// object counts are reconstructed from cumulative delivered - completed).
MetricsStore load_metrics(const std::filesystem::path& dir);

// Plot-ready series. kinds: iteration_time, memory_proxy, churn,
// makespan_hist. Unknown kinds raise Error(Errc::config).
struct Series {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

Series plot_data(const MetricsStore& store, const std::string& kind);

void write_series(const Series& series, const std::filesystem::path& path);

} // namespace schedge::metrics
