#include "schedge/metrics.hpp"

#include <algorithm>

#include "schedge/csv.hpp"
#include "schedge/error.hpp"

namespace schedge::metrics {

void MetricsStore::register_device(const std::string& id, Tier tier, uint64_t joined_cycle) {
  DeviceRecord record;
  record.device_id = id;
  record.tier = tier;
  record.joined_cycle = joined_cycle;
  devices_.emplace(id, std::move(record));
}

void MetricsStore::mark_device_removed(const std::string& id, uint64_t cycle) {
  auto it = devices_.find(id);
  if (it == devices_.end()) throw config_error("metrics: unknown device " + id);
  it->second.removed_cycle = cycle;
}

void MetricsStore::add_device_energy(const std::string& id, double wh) {
  auto it = devices_.find(id);
  if (it == devices_.end()) throw config_error("metrics: unknown device " + id);
  it->second.energy_wh += wh;
}

void MetricsStore::record_app(AppRecord record) {
  app_index_.emplace(record.app_id, apps_.size());
  apps_.push_back(std::move(record));
}

const AppRecord* MetricsStore::find_app(const std::string& app_id) const {
  auto it = app_index_.find(app_id);
  return it == app_index_.end() ? nullptr : &apps_[it->second];
}

void record_cycle(MetricsStore& store, const CycleReport& report, const SimState& state) {
  if (!store.cycles_.empty() && report.cycle <= store.cycles_.back().report.cycle) {
    throw invariant_error("record_cycle: cycle " + std::to_string(report.cycle) +
                          " not after " + std::to_string(store.cycles_.back().report.cycle));
  }
  CycleRecord record;
  record.report = report;
  record.fleet_size = state.devices.size();
  for (const auto& [_, dev] : state.devices) {
    if (dev.battery_wh) record.total_battery_wh += *dev.battery_wh;
  }
  record.live_objects = state.remaining.size() + state.running.size();
  store.cycles_.push_back(std::move(record));
}

uint64_t makespan(const MetricsStore& store, const std::string& app_id) {
  const AppRecord* record = store.find_app(app_id);
  if (!record) throw config_error("makespan: app " + app_id + " has not finished");
  return record->makespan_cycles;
}

double energy_total(const MetricsStore& store, const std::string& device_id) {
  auto it = store.devices().find(device_id);
  if (it == store.devices().end()) throw config_error("energy_total: unknown device " + device_id);
  return it->second.energy_wh;
}

double energy_total(const MetricsStore& store) {
  double total = 0;
  for (const auto& [_, record] : store.devices()) total += record.energy_wh;
  return total;
}

MetricsManifest export_metrics(const MetricsStore& store, const std::filesystem::path& dir,
                               bool include_wall_time) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw io_error("cannot create directory " + dir.string());

  MetricsManifest manifest;
  manifest.cycles_csv = dir / "cycles.csv";
  manifest.apps_csv = dir / "apps.csv";
  manifest.devices_csv = dir / "devices.csv";

  csv::Writer cycles_out(manifest.cycles_csv);
  cycles_out.line(kCyclesHeader);
  for (const auto& rec : store.cycles()) {
    cycles_out.row({csv::format_u64(rec.report.cycle), csv::format_u64(rec.report.tasks_delivered),
                    csv::format_u64(rec.report.tasks_scheduled),
                    csv::format_u64(rec.report.tasks_rejected),
                    csv::format_u64(rec.report.tasks_completed),
                    csv::format_u64(rec.report.apps_completed), csv::format_u64(rec.fleet_size),
                    csv::format_double(rec.total_battery_wh),
                    csv::format_double(include_wall_time ? rec.report.wall_time_s : 0.0)});
  }
  cycles_out.close();

  csv::Writer apps_out(manifest.apps_csv);
  apps_out.line(kAppsHeader);
  for (const auto& rec : store.apps()) {
    apps_out.row({rec.app_id, csv::format_u64(rec.arrival_cycle),
                  csv::format_u64(rec.completion_cycle), csv::format_u64(rec.makespan_cycles),
                  rec.deadline_met ? "1" : "0"});
  }
  apps_out.close();

  uint64_t end_cycle = store.cycles().empty() ? 0 : store.cycles().back().report.cycle + 1;
  csv::Writer devices_out(manifest.devices_csv);
  devices_out.line(kDevicesMetricsHeader);
  for (const auto& [id, rec] : store.devices()) {
    uint64_t until = rec.removed_cycle.value_or(end_cycle);
    uint64_t lifetime = until > rec.joined_cycle ? until - rec.joined_cycle : 0;
    devices_out.row({id, tier_name(rec.tier), csv::format_double(rec.energy_wh),
                     csv::format_u64(lifetime)});
  }
  devices_out.close();
  return manifest;
}

MetricsStore load_metrics(const std::filesystem::path& dir) {
  MetricsStore store;

  auto cycles_table = csv::read_table(dir / "cycles.csv", kCyclesHeader);
  const std::string cycles_file = (dir / "cycles.csv").string();
  uint64_t delivered_sum = 0;
  uint64_t completed_sum = 0;
  for (size_t r = 0; r < cycles_table.rows.size(); ++r) {
    const auto& row = cycles_table.rows[r];
    std::string where = cycles_file + ":" + std::to_string(cycles_table.line_numbers[r]);
    CycleRecord rec;
    rec.report.cycle = csv::parse_u64(row[0], where);
    rec.report.tasks_delivered = csv::parse_u64(row[1], where);
    rec.report.tasks_scheduled = csv::parse_u64(row[2], where);
    rec.report.tasks_rejected = csv::parse_u64(row[3], where);
    rec.report.tasks_completed = csv::parse_u64(row[4], where);
    rec.report.apps_completed = csv::parse_u64(row[5], where);
    rec.fleet_size = csv::parse_u64(row[6], where);
    rec.total_battery_wh = csv::parse_double(row[7], where);
    rec.report.wall_time_s = csv::parse_double(row[8], where);
    delivered_sum += rec.report.tasks_delivered;
    completed_sum += rec.report.tasks_completed;
    rec.live_objects = delivered_sum - std::min(completed_sum, delivered_sum);
    store.cycles_.push_back(std::move(rec));
  }

  auto apps_table = csv::read_table(dir / "apps.csv", kAppsHeader);
  const std::string apps_file = (dir / "apps.csv").string();
  for (size_t r = 0; r < apps_table.rows.size(); ++r) {
    const auto& row = apps_table.rows[r];
    std::string where = apps_file + ":" + std::to_string(apps_table.line_numbers[r]);
    AppRecord rec;
    rec.app_id = row[0];
    rec.arrival_cycle = csv::parse_u64(row[1], where);
    rec.completion_cycle = csv::parse_u64(row[2], where);
    rec.makespan_cycles = csv::parse_u64(row[3], where);
    rec.deadline_met = row[4] == "1";
    store.record_app(std::move(rec));
  }

  auto devices_table = csv::read_table(dir / "devices.csv", kDevicesMetricsHeader);
  const std::string devices_file = (dir / "devices.csv").string();
  for (size_t r = 0; r < devices_table.rows.size(); ++r) {
    const auto& row = devices_table.rows[r];
    std::string where = devices_file + ":" + std::to_string(devices_table.line_numbers[r]);
    auto tier = tier_from_name(row[1]);
    if (!tier) throw config_error("parse error: " + where + ": unknown tier " + row[1]);
    store.register_device(row[0], *tier, 0);
    store.add_device_energy(row[0], csv::parse_double(row[2], where));
  }

  return store;
}

Series plot_data(const MetricsStore& store, const std::string& kind) {
  Series series;
  if (kind == "iteration_time") {
    series.header = {"cycle", "wall_time_s"};
    for (const auto& rec : store.cycles()) {
      series.rows.push_back({static_cast<double>(rec.report.cycle), rec.report.wall_time_s});
    }
  } else if (kind == "memory_proxy") {
    series.header = {"cycle", "live_objects"};
    for (const auto& rec : store.cycles()) {
      series.rows.push_back(
          {static_cast<double>(rec.report.cycle), static_cast<double>(rec.live_objects)});
    }
  } else if (kind == "churn") {
    series.header = {"cycle", "fleet_size"};
    for (const auto& rec : store.cycles()) {
      series.rows.push_back(
          {static_cast<double>(rec.report.cycle), static_cast<double>(rec.fleet_size)});
    }
  } else if (kind == "makespan_hist") {
    series.header = {"bin_lo", "bin_hi", "count"};
    if (store.apps().empty()) return series;
    double lo = static_cast<double>(store.apps()[0].makespan_cycles);
    double hi = lo;
    for (const auto& rec : store.apps()) {
      lo = std::min(lo, static_cast<double>(rec.makespan_cycles));
      hi = std::max(hi, static_cast<double>(rec.makespan_cycles));
    }
    double span = hi - lo;
    std::vector<uint64_t> bins(10, 0);
    for (const auto& rec : store.apps()) {
      size_t bin = 0;
      if (span > 0) {
        bin = static_cast<size_t>((static_cast<double>(rec.makespan_cycles) - lo) / span * 10.0);
        if (bin > 9) bin = 9;
      }
      ++bins[bin];
    }
    for (size_t b = 0; b < bins.size(); ++b) {
      double width = span > 0 ? span / 10.0 : 1.0;
      series.rows.push_back(
          {lo + width * static_cast<double>(b), lo + width * static_cast<double>(b + 1),
           static_cast<double>(bins[b])});
    }
  } else {
    throw config_error("plot_data: unknown kind '" + kind +
                       "'; valid kinds: iteration_time, memory_proxy, churn, makespan_hist");
  }
  return series;
}

void write_series(const Series& series, const std::filesystem::path& path) {
  csv::Writer out(path);
  std::string header;
  for (size_t i = 0; i < series.header.size(); ++i) {
    if (i) header += ',';
    header += series.header[i];
  }
  out.line(header);
  for (const auto& row : series.rows) {
    std::vector<std::string> fields;
    fields.reserve(row.size());
    for (double v : row) fields.push_back(csv::format_double(v));
    out.row(fields);
  }
  out.close();
}

} // namespace schedge::metrics
