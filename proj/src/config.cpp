#include "schedge/config.hpp"

#include <cstdlib>
#include <fstream>

#include <json.hpp>

#include "schedge/error.hpp"

namespace schedge::config {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw config_error("config: " + what); }

void expect_object(const json& node, const std::string& where) {
  if (!node.is_object()) bad(where + " must be an object");
}

void check_keys(const json& node, const std::string& where,
                std::initializer_list<const char*> allowed) {
  for (const auto& [key, _] : node.items()) {
    bool known = false;
    for (const char* a : allowed) {
      if (key == a) {
        known = true;
        break;
      }
    }
    if (!known) bad("unknown key '" + where + key + "'");
  }
}

uint64_t get_u64(const json& node, const char* key, uint64_t fallback) {
  if (!node.contains(key)) return fallback;
  const json& v = node.at(key);
  if (!v.is_number_unsigned()) bad(std::string(key) + " must be a non-negative integer");
  return v.get<uint64_t>();
}

uint32_t get_u32(const json& node, const char* key, uint32_t fallback) {
  return static_cast<uint32_t>(get_u64(node, key, fallback));
}

double get_double(const json& node, const char* key, double fallback) {
  if (!node.contains(key)) return fallback;
  const json& v = node.at(key);
  if (!v.is_number()) bad(std::string(key) + " must be a number");
  return v.get<double>();
}

bool get_bool(const json& node, const char* key, bool fallback) {
  if (!node.contains(key)) return fallback;
  const json& v = node.at(key);
  if (!v.is_boolean()) bad(std::string(key) + " must be a boolean");
  return v.get<bool>();
}

std::string get_string(const json& node, const char* key, const std::string& fallback) {
  if (!node.contains(key)) return fallback;
  const json& v = node.at(key);
  if (!v.is_string()) bad(std::string(key) + " must be a string");
  return v.get<std::string>();
}

template <typename T>
datagen::Range<T> get_range(const json& node, const char* key, datagen::Range<T> fallback) {
  if (!node.contains(key)) return fallback;
  const json& v = node.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    bad(std::string(key) + " must be a two-element [lo, hi] array");
  }
  return datagen::Range<T>{v[0].get<T>(), v[1].get<T>()};
}

std::vector<uint32_t> get_u32_list(const json& node, const char* key,
                                   std::vector<uint32_t> fallback) {
  if (!node.contains(key)) return fallback;
  const json& v = node.at(key);
  if (!v.is_array() || v.empty()) bad(std::string(key) + " must be a non-empty array");
  std::vector<uint32_t> out;
  for (const auto& item : v) {
    if (!item.is_number_unsigned()) bad(std::string(key) + " entries must be unsigned integers");
    out.push_back(item.get<uint32_t>());
  }
  return out;
}

void parse_generate(const json& node, datagen::GenConfig& cfg) {
  expect_object(node, "generate");
  check_keys(node, "generate.",
             {"num_apps", "tasks_per_app", "dependency_density", "compute_load_range",
              "size_range_mb", "deadline_range_cycles", "task_safety_range", "num_iot", "num_mec",
              "cloud", "iot_core_choices", "mec_core_choices", "iot_battery_wh_range",
              "mec_battery_wh_range", "iot_core_speed", "mec_core_speed", "cloud_core_speed",
              "iot_queue_capacity", "mec_queue_capacity", "cloud_initial_cores",
              "iot_active_power_w", "iot_idle_power_w", "mec_active_power_w", "mec_idle_power_w",
              "cloud_active_power_w", "cloud_idle_power_w", "iot_safety_range",
              "mec_safety_range"});
  cfg.num_apps = get_u64(node, "num_apps", cfg.num_apps);
  cfg.tasks_per_app = get_range(node, "tasks_per_app", cfg.tasks_per_app);
  cfg.dependency_density = get_double(node, "dependency_density", cfg.dependency_density);
  cfg.compute_load_range = get_range(node, "compute_load_range", cfg.compute_load_range);
  cfg.size_range_mb = get_range(node, "size_range_mb", cfg.size_range_mb);
  cfg.deadline_range_cycles = get_range(node, "deadline_range_cycles", cfg.deadline_range_cycles);
  cfg.task_safety_range = get_range(node, "task_safety_range", cfg.task_safety_range);
  cfg.num_iot = get_u64(node, "num_iot", cfg.num_iot);
  cfg.num_mec = get_u64(node, "num_mec", cfg.num_mec);
  cfg.cloud = get_bool(node, "cloud", cfg.cloud);
  cfg.iot_core_choices = get_u32_list(node, "iot_core_choices", cfg.iot_core_choices);
  cfg.mec_core_choices = get_u32_list(node, "mec_core_choices", cfg.mec_core_choices);
  cfg.iot_battery_wh_range = get_range(node, "iot_battery_wh_range", cfg.iot_battery_wh_range);
  cfg.mec_battery_wh_range = get_range(node, "mec_battery_wh_range", cfg.mec_battery_wh_range);
  cfg.iot_core_speed = get_u32(node, "iot_core_speed", cfg.iot_core_speed);
  cfg.mec_core_speed = get_u32(node, "mec_core_speed", cfg.mec_core_speed);
  cfg.cloud_core_speed = get_u32(node, "cloud_core_speed", cfg.cloud_core_speed);
  cfg.iot_queue_capacity = get_u32(node, "iot_queue_capacity", cfg.iot_queue_capacity);
  cfg.mec_queue_capacity = get_u32(node, "mec_queue_capacity", cfg.mec_queue_capacity);
  cfg.cloud_initial_cores = get_u32(node, "cloud_initial_cores", cfg.cloud_initial_cores);
  cfg.iot_active_power_w = get_double(node, "iot_active_power_w", cfg.iot_active_power_w);
  cfg.iot_idle_power_w = get_double(node, "iot_idle_power_w", cfg.iot_idle_power_w);
  cfg.mec_active_power_w = get_double(node, "mec_active_power_w", cfg.mec_active_power_w);
  cfg.mec_idle_power_w = get_double(node, "mec_idle_power_w", cfg.mec_idle_power_w);
  cfg.cloud_active_power_w = get_double(node, "cloud_active_power_w", cfg.cloud_active_power_w);
  cfg.cloud_idle_power_w = get_double(node, "cloud_idle_power_w", cfg.cloud_idle_power_w);
  cfg.iot_safety_range = get_range(node, "iot_safety_range", cfg.iot_safety_range);
  cfg.mec_safety_range = get_range(node, "mec_safety_range", cfg.mec_safety_range);
}

void parse_window(const json& node, dataflow::WindowConfig& cfg) {
  expect_object(node, "window");
  check_keys(node, "window.", {"interval_cycles", "max_tasks", "max_apps"});
  cfg.interval_cycles = get_u32(node, "interval_cycles", cfg.interval_cycles);
  cfg.max_tasks = get_u32(node, "max_tasks", cfg.max_tasks);
  cfg.max_apps = get_u32(node, "max_apps", cfg.max_apps);
}

void parse_churn(const json& node, churn::ChurnConfig& cfg) {
  expect_object(node, "churn");
  check_keys(node, "churn.",
             {"enabled", "event_probability", "max_consecutive", "mec_add_fraction", "cap_mode",
              "manual_script"});
  cfg.enabled = get_bool(node, "enabled", cfg.enabled);
  cfg.event_probability = get_double(node, "event_probability", cfg.event_probability);
  cfg.max_consecutive = get_u32(node, "max_consecutive", cfg.max_consecutive);
  cfg.mec_add_fraction = get_double(node, "mec_add_fraction", cfg.mec_add_fraction);
  std::string cap_mode = get_string(node, "cap_mode", "flip");
  if (cap_mode == "flip") {
    cfg.cap_mode = churn::CapMode::flip;
  } else if (cap_mode == "suppress") {
    cfg.cap_mode = churn::CapMode::suppress;
  } else {
    bad("churn.cap_mode must be 'flip' or 'suppress'");
  }
  std::string script = get_string(node, "manual_script", "");
  if (!script.empty()) {
    if (!std::filesystem::exists(script)) bad("churn.manual_script: no such file: " + script);
    cfg.manual_script = churn::load_churn_script(script);
  }
}

void parse_engine(const json& node, engine::EngineConfig& cfg) {
  expect_object(node, "engine");
  check_keys(node, "engine.",
             {"total_cycles", "cycle_duration_s", "monitor_interval_cycles", "exact_cycles",
              "cloud_core_cap", "battery_death_policy", "priority_mode"});
  cfg.total_cycles = get_u64(node, "total_cycles", cfg.total_cycles);
  cfg.cycle_duration_s = get_double(node, "cycle_duration_s", cfg.cycle_duration_s);
  cfg.monitor_interval_cycles =
      get_u64(node, "monitor_interval_cycles", cfg.monitor_interval_cycles);
  cfg.exact_cycles = get_bool(node, "exact_cycles", cfg.exact_cycles);
  cfg.cloud_core_cap = get_u32(node, "cloud_core_cap", cfg.cloud_core_cap);
  std::string policy = get_string(node, "battery_death_policy", "requeue");
  if (policy == "requeue") {
    cfg.battery_death = engine::BatteryDeathPolicy::requeue;
  } else if (policy == "drop") {
    cfg.battery_death = engine::BatteryDeathPolicy::drop;
  } else {
    bad("engine.battery_death_policy must be 'requeue' or 'drop'");
  }
  std::string mode = get_string(node, "priority_mode", "direct");
  if (mode == "direct") {
    cfg.priority_mode = dataflow::PriorityMode::direct_successors;
  } else if (mode == "transitive") {
    cfg.priority_mode = dataflow::PriorityMode::transitive_successors;
  } else {
    bad("engine.priority_mode must be 'direct' or 'transitive'");
  }
}

void parse_scheduler(const json& node, engine::SchedulerConfig& cfg) {
  expect_object(node, "scheduler");
  check_keys(node, "scheduler.", {"name", "agents", "worker_threads", "reward"});
  cfg.name = get_string(node, "name", cfg.name);
  cfg.agents = get_u32(node, "agents", cfg.agents);
  cfg.worker_threads = get_u32(node, "worker_threads", cfg.worker_threads);
  if (node.contains("reward")) {
    const json& reward = node.at("reward");
    expect_object(reward, "scheduler.reward");
    check_keys(reward, "scheduler.reward.", {"scheduled", "rejected", "energy", "deadline"});
    cfg.reward.scheduled = get_double(reward, "scheduled", cfg.reward.scheduled);
    cfg.reward.rejected = get_double(reward, "rejected", cfg.reward.rejected);
    cfg.reward.energy = get_double(reward, "energy", cfg.reward.energy);
    cfg.reward.deadline = get_double(reward, "deadline", cfg.reward.deadline);
  }
}

void parse_run(const json& node, RunConfig& cfg) {
  expect_object(node, "run");
  check_keys(node, "run.", {"output_dir", "workload_dir", "event_log", "export_wall_time"});
  cfg.output_dir = get_string(node, "output_dir", cfg.output_dir);
  std::string workload = get_string(node, "workload_dir", "");
  if (!workload.empty()) {
    if (!std::filesystem::is_directory(workload))
      bad("run.workload_dir: no such directory: " + workload);
    cfg.workload_dir = workload;
  }
  std::string event_log = get_string(node, "event_log", "");
  if (!event_log.empty()) cfg.event_log = event_log;
  cfg.export_wall_time = get_bool(node, "export_wall_time", cfg.export_wall_time);
}

void apply_override(json& doc, const std::string& spec) {
  size_t eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) {
    bad("override '" + spec + "' must look like section.key=value");
  }
  std::string path = spec.substr(0, eq);
  std::string raw = spec.substr(eq + 1);

  json value;
  try {
    value = json::parse(raw);
  } catch (const json::exception&) {
    value = raw; // plain string
  }

  json* node = &doc;
  size_t start = 0;
  while (true) {
    size_t dot = path.find('.', start);
    std::string key = path.substr(start, dot == std::string::npos ? dot : dot - start);
    if (key.empty()) bad("override '" + spec + "' has an empty key segment");
    if (dot == std::string::npos) {
      (*node)[key] = value;
      break;
    }
    node = &(*node)[key];
    if (!node->is_object() && !node->is_null()) {
      bad("override '" + spec + "' descends into a non-object");
    }
    start = dot + 1;
  }
}

RunConfig parse_doc(json doc, const std::vector<std::string>& overrides) {
  for (const auto& o : overrides) apply_override(doc, o);
  if (const char* env_seed = std::getenv("SCHEDGE_SEED")) {
    try {
      doc["seed"] = json::parse(env_seed).get<uint64_t>();
    } catch (const json::exception&) {
      bad("SCHEDGE_SEED must be an unsigned integer, got '" + std::string(env_seed) + "'");
    }
  }

  expect_object(doc, "top level");
  check_keys(doc, "", {"seed", "generate", "window", "churn", "engine", "scheduler", "run"});

  RunConfig cfg;
  cfg.seed = get_u64(doc, "seed", cfg.seed);
  if (doc.contains("generate")) parse_generate(doc.at("generate"), cfg.gen);
  if (doc.contains("window")) parse_window(doc.at("window"), cfg.engine.window);
  if (doc.contains("churn")) parse_churn(doc.at("churn"), cfg.engine.churn);
  if (doc.contains("engine")) parse_engine(doc.at("engine"), cfg.engine);
  if (doc.contains("scheduler")) parse_scheduler(doc.at("scheduler"), cfg.scheduler);
  if (doc.contains("run")) parse_run(doc.at("run"), cfg);

  cfg.gen.seed = cfg.seed;
  cfg.engine.seed = cfg.seed;

  datagen::validate_config(cfg.gen);
  engine::validate_engine_config(cfg.engine);
  if (cfg.scheduler.agents == 0) bad("scheduler.agents must be >= 1");
  // Fails fast on unknown scheduler names.
  sched::make_scheduler(cfg.scheduler.name, 0, 0);
  return cfg;
}

} // namespace

RunConfig load_run_config(const std::filesystem::path& path,
                          const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::exception& e) {
    bad(path.string() + ": " + e.what());
  }
  return parse_doc(std::move(doc), overrides);
}

RunConfig default_run_config(const std::vector<std::string>& overrides) {
  return parse_doc(json::object(), overrides);
}

} // namespace schedge::config
