#include "schedge/churn.hpp"

#include <algorithm>
#include <cmath>

#include "schedge/csv.hpp"
#include "schedge/error.hpp"

namespace schedge::churn {

void validate_churn_config(const ChurnConfig& cfg) {
  if (cfg.event_probability < 0.0 || cfg.event_probability > 1.0)
    throw config_error("churn event_probability outside [0, 1]");
  if (cfg.max_consecutive == 0) throw config_error("churn max_consecutive must be >= 1");
  if (cfg.mec_add_fraction < 0.0 || cfg.mec_add_fraction > 1.0)
    throw config_error("churn mec_add_fraction outside [0, 1]");
  for (const auto& [cycle, directive] : cfg.manual_script) {
    if (directive.action == Direction::add) {
      if (!directive.tier) throw config_error("churn script: add at cycle " +
                                              std::to_string(cycle) + " needs a tier");
      if (*directive.tier == Tier::Cloud)
        throw config_error("churn script: Cloud devices cannot be added");
    }
  }
}

std::map<uint64_t, ScriptDirective> load_churn_script(const std::filesystem::path& path) {
  auto table = csv::read_table(path, "cycle,action,tier");
  std::map<uint64_t, ScriptDirective> script;
  for (size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    std::string where = path.string() + ":" + std::to_string(table.line_numbers[r]);
    uint64_t cycle = csv::parse_u64(row[0], where + ": cycle");
    ScriptDirective directive;
    if (row[1] == "add") {
      directive.action = Direction::add;
      auto tier = tier_from_name(row[2]);
      if (!tier || *tier == Tier::Cloud)
        throw config_error("parse error: " + where + ": add requires tier IoT or MEC");
      directive.tier = tier;
    } else if (row[1] == "remove") {
      directive.action = Direction::remove;
      if (!row[2].empty())
        throw config_error("parse error: " + where + ": remove takes no tier");
    } else {
      throw config_error("parse error: " + where + ": action must be add or remove");
    }
    if (!script.emplace(cycle, directive).second)
      throw config_error("parse error: " + where + ": duplicate directive for cycle " + row[0]);
  }
  return script;
}

namespace {

uint64_t next_ordinal(SimState& state, Tier tier) {
  uint64_t& counter = tier == Tier::MEC ? state.next_mec_index : state.next_iot_index;
  return counter++;
}

bool has_removable_device(const SimState& state) {
  return std::any_of(state.devices.begin(), state.devices.end(),
                     [](const auto& kv) { return kv.second.tier != Tier::Cloud; });
}

} // namespace

const DeviceSpec& add_device(SimState& state, Tier tier, Rng& rng,
                             const datagen::GenConfig& gen_cfg) {
  if (tier == Tier::Cloud) throw config_error("add_device: Cloud devices cannot be added");
  uint64_t ordinal = next_ordinal(state, tier);
  // Skip over ids already taken by hand-built fleets.
  while (state.devices.contains(datagen::device_name(tier, ordinal))) {
    ordinal = next_ordinal(state, tier);
  }
  DeviceSpec dev = datagen::generate_device(gen_cfg, tier, ordinal, rng);
  auto [it, inserted] = state.devices.emplace(dev.device_id, std::move(dev));
  (void)inserted;
  return it->second;
}

RemovedDevice remove_device(SimState& state, Rng& rng) {
  std::vector<std::string> candidates;
  for (const auto& [id, dev] : state.devices) {
    if (dev.tier != Tier::Cloud) candidates.push_back(id);
  }
  if (candidates.empty())
    throw config_error("remove_device: no non-Cloud device available");

  RemovedDevice removed;
  removed.device_id = candidates[rng.index(candidates.size())];
  DeviceSpec& dev = state.devices.at(removed.device_id);
  for (auto& core : dev.cores) {
    for (const auto& task_id : core.queue) removed.requeued_tasks.push_back(task_id);
    if (core.running) removed.requeued_tasks.push_back(core.running->task_id);
  }
  for (const auto& task_id : removed.requeued_tasks) {
    state.running.erase(task_id);
    state.remaining.insert(task_id);
  }
  state.devices.erase(removed.device_id);
  return removed;
}

std::optional<ChurnEvent> maybe_churn(SimState& state, const ChurnConfig& cfg,
                                      ChurnHistory& history, Rng& rng,
                                      const datagen::GenConfig& gen_cfg) {
  if (!cfg.enabled) return std::nullopt;

  Direction direction;
  std::optional<Tier> scripted_tier;
  auto directive = cfg.manual_script.find(state.cycle);
  if (directive != cfg.manual_script.end()) {
    direction = directive->second.action;
    scripted_tier = directive->second.tier;
    if (direction == Direction::remove && !has_removable_device(state))
      throw config_error("churn script: no removable device at cycle " +
                         std::to_string(state.cycle));
  } else {
    if (!rng.bernoulli(cfg.event_probability)) return std::nullopt;
    direction = rng.bernoulli(0.5) ? Direction::add : Direction::remove;
    if (history.last_direction == direction && history.consecutive_count >= cfg.max_consecutive) {
      if (cfg.cap_mode == CapMode::suppress) return std::nullopt;
      direction = direction == Direction::add ? Direction::remove : Direction::add;
    }
    // A remove with nothing to remove becomes an add. This cannot breach the
    // cap: three preceding consecutive adds imply three removable devices.
    if (direction == Direction::remove && !has_removable_device(state)) {
      direction = Direction::add;
    }
  }

  ChurnEvent event;
  event.direction = direction;
  if (direction == Direction::add) {
    Tier tier = scripted_tier
                    ? *scripted_tier
                    : (rng.bernoulli(cfg.mec_add_fraction) ? Tier::MEC : Tier::IoT);
    const DeviceSpec& dev = add_device(state, tier, rng, gen_cfg);
    event.device_id = dev.device_id;
    event.tier = tier;
    ++history.total_added;
  } else {
    RemovedDevice removed = remove_device(state, rng);
    event.device_id = removed.device_id;
    event.requeued_tasks = std::move(removed.requeued_tasks);
    ++history.total_removed;
  }

  if (history.last_direction == direction) {
    ++history.consecutive_count;
  } else {
    history.last_direction = direction;
    history.consecutive_count = 1;
  }
  history.log.push_back(ChurnLogEntry{state.cycle, direction, event.device_id});
  return event;
}

std::vector<SweepRow> churn_sweep(const ChurnRunFn& run, const std::vector<double>& probabilities,
                                  uint64_t cycles, const std::vector<uint64_t>& seeds) {
  for (double p : probabilities) {
    if (p < 0.0 || p > 1.0)
      throw config_error("churn_sweep: probability " + std::to_string(p) + " outside [0, 1]");
  }
  if (seeds.empty()) throw config_error("churn_sweep: at least one seed required");

  std::vector<SweepRow> rows;
  rows.reserve(probabilities.size());
  for (double p : probabilities) {
    std::vector<double> added, removed;
    added.reserve(seeds.size());
    removed.reserve(seeds.size());
    for (uint64_t seed : seeds) {
      ChurnCounts counts = run(p, seed, cycles);
      added.push_back(static_cast<double>(counts.added));
      removed.push_back(static_cast<double>(counts.removed));
    }
    auto mean = [](const std::vector<double>& v) {
      double s = 0;
      for (double x : v) s += x;
      return s / static_cast<double>(v.size());
    };
    auto stddev = [](const std::vector<double>& v, double m) {
      double s = 0;
      for (double x : v) s += (x - m) * (x - m);
      return std::sqrt(s / static_cast<double>(v.size()));
    };
    SweepRow row;
    row.probability = p;
    row.mean_added = mean(added);
    row.mean_removed = mean(removed);
    row.stddev_added = stddev(added, row.mean_added);
    row.stddev_removed = stddev(removed, row.mean_removed);
    rows.push_back(row);
  }
  return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path) {
  csv::Writer out(path);
  out.line(kSweepHeader);
  for (const auto& row : rows) {
    out.row({csv::format_double(row.probability), csv::format_double(row.mean_added),
             csv::format_double(row.mean_removed), csv::format_double(row.stddev_added),
             csv::format_double(row.stddev_removed)});
  }
  out.close();
}

} // namespace schedge::churn
