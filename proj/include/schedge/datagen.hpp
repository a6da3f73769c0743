#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "schedge/model.hpp"
#include "schedge/rng.hpp"

namespace schedge::datagen {

template <typename T>
struct Range {
  T lo{};
  T hi{};
  bool contains(T v) const { return v >= lo && v <= hi; }
};

// Workload and fleet generation parameters. Attribute values are drawn
// uniformly from their configured ranges.
struct GenConfig {
  uint64_t num_apps = 10000;
  Range<uint32_t> tasks_per_app{20, 60};
  double dependency_density = 0.3;
  Range<uint64_t> compute_load_range{1, 100};
  Range<uint32_t> size_range_mb{1, 1024};
  Range<uint64_t> deadline_range_cycles{100, 1000};
  Range<uint32_t> task_safety_range{0, 3};

  uint64_t num_iot = 100;
  uint64_t num_mec = 50;
  bool cloud = true;
  std::vector<uint32_t> iot_core_choices{4, 8, 16};
  std::vector<uint32_t> mec_core_choices{16, 32, 64};
  Range<double> iot_battery_wh_range{36.0, 41.0};
  Range<double> mec_battery_wh_range{200.0, 400.0};

  uint32_t iot_core_speed = 2;
  uint32_t mec_core_speed = 8;
  uint32_t cloud_core_speed = 16;
  uint32_t iot_queue_capacity = 5;
  uint32_t mec_queue_capacity = 20;
  uint32_t cloud_initial_cores = 64;
  double iot_active_power_w = 2.0;
  double iot_idle_power_w = 0.2;
  double mec_active_power_w = 8.0;
  double mec_idle_power_w = 0.8;
  double cloud_active_power_w = 16.0;
  double cloud_idle_power_w = 1.6;
  Range<uint32_t> iot_safety_range{0, 3};
  Range<uint32_t> mec_safety_range{0, 3};

  uint64_t seed = 1;
};

// Throws Error(Errc::config) naming the first offending field.
void validate_config(const GenConfig& cfg);

// Random DAG edges as (pred, succ) index pairs: a random permutation with
// forward edges drawn at `density`, plus a connectivity floor giving every
// non-root task at least one predecessor when density > 0. Acyclic by
// construction.
std::vector<std::pair<uint32_t, uint32_t>> generate_dag(uint32_t num_tasks, double density,
                                                        Rng& rng);

std::vector<ApplicationSpec> generate_applications(const GenConfig& cfg, Rng& rng);

std::vector<DeviceSpec> generate_devices(const GenConfig& cfg, Rng& rng);

// Canonical device id for a tier + ordinal ("iot007", "mec003", "cloud0").
std::string device_name(Tier tier, uint64_t ordinal);

// Fresh churn-time device of the given tier, drawn from the same per-tier
// distributions as the initial fleet. `ordinal` must be unique per tier.
DeviceSpec generate_device(const GenConfig& cfg, Tier tier, uint64_t ordinal, Rng& rng);

// ---------------------------------------------------------------------------
// CSV persistence
// ---------------------------------------------------------------------------

inline constexpr const char* kApplicationsHeader = "app_id,deadline_cycles,num_tasks";
inline constexpr const char* kTasksHeader =
    "task_id,app_id,compute_load,input_size_mb,output_size_mb,safety_level,predecessors";
inline constexpr const char* kDevicesHeader =
    "device_id,tier,num_cores,core_speed,queue_capacity,battery_wh,active_power_w,idle_power_w,"
    "safety_capability";

struct FileManifest {
  std::filesystem::path applications_csv;
  std::filesystem::path tasks_csv;
  std::filesystem::path devices_csv;
  uint64_t application_rows = 0;
  uint64_t task_rows = 0;
  uint64_t device_rows = 0;
};

// Writes applications.csv, tasks.csv and devices.csv into `dir`. Refuses to
// serialize invariant-violating applications.
FileManifest export_csv(const std::vector<ApplicationSpec>& apps,
                        const std::vector<DeviceSpec>& devices,
                        const std::filesystem::path& dir);

struct Workload {
  std::vector<ApplicationSpec> apps;
  std::vector<DeviceSpec> devices;
};

// Loads and validates a workload written by export_csv. Parse errors carry
// file and line; structural problems are reported as invariant violations.
Workload load_csv(const std::filesystem::path& dir);

// ---------------------------------------------------------------------------
// Distribution reporting
// ---------------------------------------------------------------------------

struct AttributeStats {
  std::string name;
  double min = 0;
  double max = 0;
  double mean = 0;
  double stddev = 0; // population
  std::array<uint64_t, 10> histogram{};
};

// Summary statistics for task/application attributes; deterministic.
// Throws Error(Errc::config) on an empty input.
std::vector<AttributeStats> distribution_report(const std::vector<ApplicationSpec>& apps);

} // namespace schedge::datagen
