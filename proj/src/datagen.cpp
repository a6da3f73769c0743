#include "schedge/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "schedge/csv.hpp"
#include "schedge/error.hpp"

namespace schedge::datagen {

namespace {

std::string padded(const char* prefix, uint64_t value, int width) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%0*llu", prefix, width,
                static_cast<unsigned long long>(value));
  return buf;
}

std::string app_name(uint64_t index) { return padded("a", index, 5); }

std::string task_name(const std::string& app_id, uint64_t index) {
  return app_id + padded("t", index, 2);
}

} // namespace

void validate_config(const GenConfig& cfg) {
  auto bad = [](const std::string& what) { throw config_error("invalid GenConfig: " + what); };
  if (cfg.tasks_per_app.lo < 1 || cfg.tasks_per_app.lo > cfg.tasks_per_app.hi)
    bad("tasks_per_app range empty or zero");
  if (cfg.dependency_density < 0.0 || cfg.dependency_density > 1.0)
    bad("dependency_density outside [0, 1]");
  if (cfg.compute_load_range.lo < 1 || cfg.compute_load_range.lo > cfg.compute_load_range.hi)
    bad("compute_load_range empty or zero");
  if (cfg.size_range_mb.lo < 1 || cfg.size_range_mb.hi > 1024 ||
      cfg.size_range_mb.lo > cfg.size_range_mb.hi)
    bad("size_range_mb outside [1, 1024]");
  if (cfg.deadline_range_cycles.lo < 1 || cfg.deadline_range_cycles.lo > cfg.deadline_range_cycles.hi)
    bad("deadline_range_cycles empty or zero");
  if (cfg.task_safety_range.hi > 3 || cfg.task_safety_range.lo > cfg.task_safety_range.hi)
    bad("task_safety_range outside [0, 3]");
  if (cfg.iot_safety_range.hi > 3 || cfg.iot_safety_range.lo > cfg.iot_safety_range.hi)
    bad("iot_safety_range outside [0, 3]");
  if (cfg.mec_safety_range.hi > 3 || cfg.mec_safety_range.lo > cfg.mec_safety_range.hi)
    bad("mec_safety_range outside [0, 3]");
  if (cfg.iot_core_choices.empty() || cfg.mec_core_choices.empty())
    bad("core choice lists must be non-empty");
  for (uint32_t c : cfg.iot_core_choices)
    if (c == 0) bad("iot_core_choices contains 0");
  for (uint32_t c : cfg.mec_core_choices)
    if (c == 0) bad("mec_core_choices contains 0");
  if (cfg.iot_battery_wh_range.lo < 0 || cfg.iot_battery_wh_range.lo > cfg.iot_battery_wh_range.hi)
    bad("iot_battery_wh_range empty or negative");
  if (cfg.mec_battery_wh_range.lo < 0 || cfg.mec_battery_wh_range.lo > cfg.mec_battery_wh_range.hi)
    bad("mec_battery_wh_range empty or negative");
  if (cfg.iot_core_speed == 0 || cfg.mec_core_speed == 0 || cfg.cloud_core_speed == 0)
    bad("core speeds must be >= 1");
  if (cfg.cloud_initial_cores == 0) bad("cloud_initial_cores must be >= 1");
  if (cfg.iot_active_power_w < 0 || cfg.iot_idle_power_w < 0 || cfg.mec_active_power_w < 0 ||
      cfg.mec_idle_power_w < 0 || cfg.cloud_active_power_w < 0 || cfg.cloud_idle_power_w < 0)
    bad("power values must be non-negative");
}

std::vector<std::pair<uint32_t, uint32_t>> generate_dag(uint32_t num_tasks, double density,
                                                        Rng& rng) {
  std::vector<std::pair<uint32_t, uint32_t>> edges;
  if (num_tasks <= 1) return edges;

  std::vector<uint32_t> order(num_tasks);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);

  for (uint32_t j = 1; j < num_tasks; ++j) {
    size_t before = edges.size();
    for (uint32_t i = 0; i < j; ++i) {
      if (rng.bernoulli(density)) edges.emplace_back(order[i], order[j]);
    }
    // Connectivity floor: tie orphans to one uniformly chosen earlier task.
    if (edges.size() == before && density > 0.0) {
      edges.emplace_back(order[rng.index(j)], order[j]);
    }
  }
  return edges;
}

std::vector<ApplicationSpec> generate_applications(const GenConfig& cfg, Rng& rng) {
  validate_config(cfg);

  std::vector<ApplicationSpec> apps;
  apps.reserve(cfg.num_apps);
  for (uint64_t a = 0; a < cfg.num_apps; ++a) {
    ApplicationSpec app;
    app.app_id = app_name(a);

    uint32_t n = rng.uniform_u32(cfg.tasks_per_app.lo, cfg.tasks_per_app.hi);
    auto edges = generate_dag(n, cfg.dependency_density, rng);

    std::vector<std::vector<std::string>> preds(n);
    for (const auto& [from, to] : edges) {
      preds[to].push_back(task_name(app.app_id, from));
    }

    app.tasks.reserve(n);
    for (uint32_t t = 0; t < n; ++t) {
      TaskSpec task;
      task.task_id = task_name(app.app_id, t);
      task.app_id = app.app_id;
      task.compute_load = rng.uniform_u64(cfg.compute_load_range.lo, cfg.compute_load_range.hi);
      task.input_size_mb = rng.uniform_u32(cfg.size_range_mb.lo, cfg.size_range_mb.hi);
      task.output_size_mb = rng.uniform_u32(cfg.size_range_mb.lo, cfg.size_range_mb.hi);
      task.safety_level =
          static_cast<uint8_t>(rng.uniform_u32(cfg.task_safety_range.lo, cfg.task_safety_range.hi));
      std::sort(preds[t].begin(), preds[t].end());
      preds[t].erase(std::unique(preds[t].begin(), preds[t].end()), preds[t].end());
      task.predecessors = std::move(preds[t]);
      app.tasks.push_back(std::move(task));
    }

    app.deadline_cycles =
        rng.uniform_u64(cfg.deadline_range_cycles.lo, cfg.deadline_range_cycles.hi);
    apps.push_back(std::move(app));
  }
  return apps;
}

std::string device_name(Tier tier, uint64_t ordinal) {
  switch (tier) {
    case Tier::IoT: return padded("iot", ordinal, 3);
    case Tier::MEC: return padded("mec", ordinal, 3);
    case Tier::Cloud: return padded("cloud", ordinal, 1);
  }
  return "?";
}

DeviceSpec generate_device(const GenConfig& cfg, Tier tier, uint64_t ordinal, Rng& rng) {
  DeviceSpec dev;
  dev.tier = tier;
  dev.device_id = device_name(tier, ordinal);
  switch (tier) {
    case Tier::IoT: {
      uint32_t cores = rng.pick(cfg.iot_core_choices);
      dev.cores.assign(cores, CoreState{cfg.iot_core_speed, cfg.iot_queue_capacity, {}, {}});
      dev.battery_wh = rng.uniform_real(cfg.iot_battery_wh_range.lo, cfg.iot_battery_wh_range.hi);
      dev.active_power_w = cfg.iot_active_power_w;
      dev.idle_power_w = cfg.iot_idle_power_w;
      dev.safety_capability =
          static_cast<uint8_t>(rng.uniform_u32(cfg.iot_safety_range.lo, cfg.iot_safety_range.hi));
      break;
    }
    case Tier::MEC: {
      uint32_t cores = rng.pick(cfg.mec_core_choices);
      dev.cores.assign(cores, CoreState{cfg.mec_core_speed, cfg.mec_queue_capacity, {}, {}});
      dev.battery_wh = rng.uniform_real(cfg.mec_battery_wh_range.lo, cfg.mec_battery_wh_range.hi);
      dev.active_power_w = cfg.mec_active_power_w;
      dev.idle_power_w = cfg.mec_idle_power_w;
      dev.safety_capability =
          static_cast<uint8_t>(rng.uniform_u32(cfg.mec_safety_range.lo, cfg.mec_safety_range.hi));
      break;
    }
    case Tier::Cloud: {
      // Queue capacity 0 = unbounded; the core pool itself grows on demand.
      dev.cores.assign(cfg.cloud_initial_cores, CoreState{cfg.cloud_core_speed, 0, {}, {}});
      dev.battery_wh.reset();
      dev.active_power_w = cfg.cloud_active_power_w;
      dev.idle_power_w = cfg.cloud_idle_power_w;
      dev.safety_capability = 3;
      break;
    }
  }
  return dev;
}

std::vector<DeviceSpec> generate_devices(const GenConfig& cfg, Rng& rng) {
  validate_config(cfg);
  std::vector<DeviceSpec> devices;
  devices.reserve(cfg.num_iot + cfg.num_mec + (cfg.cloud ? 1 : 0));
  for (uint64_t i = 0; i < cfg.num_iot; ++i)
    devices.push_back(generate_device(cfg, Tier::IoT, i, rng));
  for (uint64_t i = 0; i < cfg.num_mec; ++i)
    devices.push_back(generate_device(cfg, Tier::MEC, i, rng));
  if (cfg.cloud) devices.push_back(generate_device(cfg, Tier::Cloud, 0, rng));
  return devices;
}

// ---------------------------------------------------------------------------
// CSV persistence
// ---------------------------------------------------------------------------

namespace {

void check_exportable_device(const DeviceSpec& dev) {
  if (dev.cores.empty()) throw config_error("device " + dev.device_id + " has no cores");
  for (const auto& core : dev.cores) {
    if (core.speed != dev.cores[0].speed || core.queue_capacity != dev.cores[0].queue_capacity) {
      throw config_error("device " + dev.device_id +
                         " has heterogeneous cores; the CSV schema stores one speed/capacity");
    }
    if (core.speed == 0) throw config_error("device " + dev.device_id + " has a zero-speed core");
  }
  if (dev.tier == Tier::Cloud && dev.battery_wh.has_value())
    throw config_error("Cloud device " + dev.device_id + " must not carry a battery");
  if (dev.tier != Tier::Cloud && !dev.battery_wh.has_value())
    throw config_error("device " + dev.device_id + " requires a battery_wh value");
  if (dev.safety_capability > 3)
    throw config_error("device " + dev.device_id + " safety capability outside [0, 3]");
}

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

} // namespace

FileManifest export_csv(const std::vector<ApplicationSpec>& apps,
                        const std::vector<DeviceSpec>& devices,
                        const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw io_error("cannot create directory " + dir.string());

  for (const auto& app : apps) {
    auto violations = validate_application(app);
    if (!violations.empty()) {
      throw config_error("refusing to export invalid application " + app.app_id + ": " +
                         violations.front().message);
    }
  }
  for (const auto& dev : devices) check_exportable_device(dev);

  FileManifest manifest;
  manifest.applications_csv = dir / "applications.csv";
  manifest.tasks_csv = dir / "tasks.csv";
  manifest.devices_csv = dir / "devices.csv";

  csv::Writer apps_out(manifest.applications_csv);
  apps_out.line(kApplicationsHeader);
  csv::Writer tasks_out(manifest.tasks_csv);
  tasks_out.line(kTasksHeader);
  for (const auto& app : apps) {
    apps_out.row({app.app_id, csv::format_u64(app.deadline_cycles),
                  csv::format_u64(app.tasks.size())});
    ++manifest.application_rows;
    for (const auto& task : app.tasks) {
      tasks_out.row({task.task_id, task.app_id, csv::format_u64(task.compute_load),
                     csv::format_u64(task.input_size_mb), csv::format_u64(task.output_size_mb),
                     csv::format_u64(task.safety_level), join(task.predecessors, ';')});
      ++manifest.task_rows;
    }
  }
  apps_out.close();
  tasks_out.close();

  csv::Writer dev_out(manifest.devices_csv);
  dev_out.line(kDevicesHeader);
  for (const auto& dev : devices) {
    dev_out.row({dev.device_id, tier_name(dev.tier), csv::format_u64(dev.cores.size()),
                 csv::format_u64(dev.cores[0].speed), csv::format_u64(dev.cores[0].queue_capacity),
                 dev.battery_wh ? csv::format_double(*dev.battery_wh) : std::string(),
                 csv::format_double(dev.active_power_w), csv::format_double(dev.idle_power_w),
                 csv::format_u64(dev.safety_capability)});
    ++manifest.device_rows;
  }
  dev_out.close();
  return manifest;
}

Workload load_csv(const std::filesystem::path& dir) {
  auto apps_table = csv::read_table(dir / "applications.csv", kApplicationsHeader);
  auto tasks_table = csv::read_table(dir / "tasks.csv", kTasksHeader);
  auto devices_table = csv::read_table(dir / "devices.csv", kDevicesHeader);

  Workload workload;
  std::unordered_map<std::string, size_t> app_index;
  std::unordered_map<std::string, uint64_t> declared_tasks;

  const std::string apps_file = (dir / "applications.csv").string();
  for (size_t r = 0; r < apps_table.rows.size(); ++r) {
    const auto& row = apps_table.rows[r];
    std::string where = apps_file + ":" + std::to_string(apps_table.line_numbers[r]);
    ApplicationSpec app;
    app.app_id = row[0];
    app.deadline_cycles = csv::parse_u64(row[1], where + ": deadline_cycles");
    uint64_t num_tasks = csv::parse_u64(row[2], where + ": num_tasks");
    if (app.deadline_cycles == 0)
      throw config_error("invariant violation: " + where + ": app " + app.app_id +
                         " has zero deadline");
    if (!app_index.emplace(app.app_id, workload.apps.size()).second)
      throw config_error("invariant violation: " + where + ": duplicate app id " + app.app_id);
    declared_tasks.emplace(app.app_id, num_tasks);
    workload.apps.push_back(std::move(app));
  }

  const std::string tasks_file = (dir / "tasks.csv").string();
  std::unordered_set<std::string> global_task_ids;
  for (size_t r = 0; r < tasks_table.rows.size(); ++r) {
    const auto& row = tasks_table.rows[r];
    std::string where = tasks_file + ":" + std::to_string(tasks_table.line_numbers[r]);
    TaskSpec task;
    task.task_id = row[0];
    task.app_id = row[1];
    task.compute_load = csv::parse_u64(row[2], where + ": compute_load");
    task.input_size_mb = static_cast<uint32_t>(csv::parse_u64(row[3], where + ": input_size_mb"));
    task.output_size_mb = static_cast<uint32_t>(csv::parse_u64(row[4], where + ": output_size_mb"));
    task.safety_level = static_cast<uint8_t>(csv::parse_u64(row[5], where + ": safety_level"));
    task.predecessors = csv::split_list(row[6]);
    std::sort(task.predecessors.begin(), task.predecessors.end());
    task.predecessors.erase(std::unique(task.predecessors.begin(), task.predecessors.end()),
                            task.predecessors.end());

    if (!global_task_ids.insert(task.task_id).second)
      throw config_error("invariant violation: " + where + ": duplicate task id " + task.task_id);
    auto it = app_index.find(task.app_id);
    if (it == app_index.end())
      throw config_error("invariant violation: " + where + ": task " + task.task_id +
                         " references unknown app " + task.app_id);
    workload.apps[it->second].tasks.push_back(std::move(task));
  }

  for (const auto& app : workload.apps) {
    if (app.tasks.size() != declared_tasks[app.app_id]) {
      throw config_error("invariant violation: app " + app.app_id + " declares " +
                         std::to_string(declared_tasks[app.app_id]) + " tasks but " +
                         std::to_string(app.tasks.size()) + " were loaded");
    }
    auto violations = validate_application(app);
    if (!violations.empty()) {
      throw config_error("invariant violation: app " + app.app_id + ": " +
                         violations.front().message);
    }
  }

  const std::string devices_file = (dir / "devices.csv").string();
  std::unordered_set<std::string> device_ids;
  for (size_t r = 0; r < devices_table.rows.size(); ++r) {
    const auto& row = devices_table.rows[r];
    std::string where = devices_file + ":" + std::to_string(devices_table.line_numbers[r]);
    DeviceSpec dev;
    dev.device_id = row[0];
    auto tier = tier_from_name(row[1]);
    if (!tier)
      throw config_error("parse error: " + where + ": unknown tier '" + row[1] + "'");
    dev.tier = *tier;
    uint64_t num_cores = csv::parse_u64(row[2], where + ": num_cores");
    uint32_t speed = static_cast<uint32_t>(csv::parse_u64(row[3], where + ": core_speed"));
    uint32_t capacity = static_cast<uint32_t>(csv::parse_u64(row[4], where + ": queue_capacity"));
    if (num_cores == 0)
      throw config_error("invariant violation: " + where + ": device " + dev.device_id +
                         " has zero cores");
    if (speed == 0)
      throw config_error("invariant violation: " + where + ": device " + dev.device_id +
                         " has zero core speed");
    dev.cores.assign(num_cores, CoreState{speed, capacity, {}, {}});
    if (row[5].empty()) {
      if (dev.tier != Tier::Cloud)
        throw config_error("invariant violation: " + where + ": non-Cloud device " +
                           dev.device_id + " requires battery_wh");
    } else {
      if (dev.tier == Tier::Cloud)
        throw config_error("invariant violation: " + where + ": Cloud device " + dev.device_id +
                           " must have empty battery_wh");
      double battery = csv::parse_double(row[5], where + ": battery_wh");
      if (battery < 0)
        throw config_error("invariant violation: " + where + ": negative battery_wh");
      dev.battery_wh = battery;
    }
    dev.active_power_w = csv::parse_double(row[6], where + ": active_power_w");
    dev.idle_power_w = csv::parse_double(row[7], where + ": idle_power_w");
    uint64_t safety = csv::parse_u64(row[8], where + ": safety_capability");
    if (safety > 3)
      throw config_error("invariant violation: " + where + ": safety_capability outside [0, 3]");
    dev.safety_capability = static_cast<uint8_t>(safety);
    if (!device_ids.insert(dev.device_id).second)
      throw config_error("invariant violation: " + where + ": duplicate device id " +
                         dev.device_id);
    workload.devices.push_back(std::move(dev));
  }

  return workload;
}

// ---------------------------------------------------------------------------
// Distribution reporting
// ---------------------------------------------------------------------------

namespace {

AttributeStats stats_for(const std::string& name, const std::vector<double>& values) {
  AttributeStats stats;
  stats.name = name;
  if (values.empty()) return stats;

  stats.min = values[0];
  stats.max = values[0];
  double sum = 0;
  for (double v : values) {
    stats.min = std::min(stats.min, v);
    stats.max = std::max(stats.max, v);
    sum += v;
  }
  stats.mean = sum / static_cast<double>(values.size());
  double sq = 0;
  for (double v : values) sq += (v - stats.mean) * (v - stats.mean);
  stats.stddev = std::sqrt(sq / static_cast<double>(values.size()));

  double span = stats.max - stats.min;
  for (double v : values) {
    size_t bin = 0;
    if (span > 0) {
      bin = static_cast<size_t>((v - stats.min) / span * 10.0);
      if (bin > 9) bin = 9;
    }
    ++stats.histogram[bin];
  }
  return stats;
}

} // namespace

std::vector<AttributeStats> distribution_report(const std::vector<ApplicationSpec>& apps) {
  if (apps.empty()) throw config_error("distribution_report: empty application list");

  std::vector<double> task_counts, deadlines, loads, in_sizes, out_sizes, safeties, pred_counts;
  for (const auto& app : apps) {
    task_counts.push_back(static_cast<double>(app.tasks.size()));
    deadlines.push_back(static_cast<double>(app.deadline_cycles));
    for (const auto& task : app.tasks) {
      loads.push_back(static_cast<double>(task.compute_load));
      in_sizes.push_back(static_cast<double>(task.input_size_mb));
      out_sizes.push_back(static_cast<double>(task.output_size_mb));
      safeties.push_back(static_cast<double>(task.safety_level));
      pred_counts.push_back(static_cast<double>(task.predecessors.size()));
    }
  }

  return {
      stats_for("task_count", task_counts),
      stats_for("deadline_cycles", deadlines),
      stats_for("compute_load", loads),
      stats_for("input_size_mb", in_sizes),
      stats_for("output_size_mb", out_sizes),
      stats_for("safety_level", safeties),
      stats_for("num_predecessors", pred_counts),
  };
}

} // namespace schedge::datagen
