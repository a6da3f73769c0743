#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "schedge/churn.hpp"
#include "schedge/dataflow.hpp"
#include "schedge/datagen.hpp"
#include "schedge/events.hpp"
#include "schedge/metrics.hpp"
#include "schedge/model.hpp"
#include "schedge/report.hpp"
#include "schedge/scheduling.hpp"

namespace schedge::engine {

enum class BatteryDeathPolicy : uint8_t {
  requeue, // displaced tasks return to the remaining ledger (work lost)
  drop     // displaced tasks move to the lost ledger
};

struct EngineConfig {
  uint64_t total_cycles = 10000;
  double cycle_duration_s = 0.001;
  dataflow::WindowConfig window;
  churn::ChurnConfig churn;
  uint64_t monitor_interval_cycles = 100;
  uint64_t seed = 1;
  bool exact_cycles = false; // disable early stop on workload exhaustion
  uint32_t cloud_core_cap = 10000;
  BatteryDeathPolicy battery_death = BatteryDeathPolicy::requeue;
  dataflow::PriorityMode priority_mode = dataflow::PriorityMode::direct_successors;
};

void validate_engine_config(const EngineConfig& cfg);

struct SchedulerConfig {
  std::string name = "greedy_eft";
  uint32_t agents = 24;
  uint32_t worker_threads = 1; // 0 = auto
  sched::RewardWeights reward;
};

// ---------------------------------------------------------------------------
// State-transition operations (free functions so they can be unit tested on
// hand-built states; Environment::step composes them)
// ---------------------------------------------------------------------------

// Applies the commit constraints in order: device/core known, task ready,
// safety level within capability, battery charge present, queue room. On
// accept the task is enqueued and moved remaining -> running; on reject it
// stays in the remaining ledger (carried forward).
sched::CommitStatus commit_assignment(SimState& state, const Assignment& assignment);

struct AdvanceOptions {
  BatteryDeathPolicy battery_death = BatteryDeathPolicy::requeue;
  uint32_t cloud_core_cap = 10000;
  EventSink* sink = nullptr;
};

struct AdvanceResult {
  std::vector<std::string> completed;
  double energy_wh = 0.0; // fleet-wide, this cycle
  std::vector<std::pair<std::string, double>> per_device_energy_wh;
  std::vector<std::string> displaced; // tasks requeued or dropped by battery death
};

// One execution cycle over every device, in order: (1) decrement running
// tasks, completing those that reach zero; (2) pop queue heads into idle
// cores (a fresh pop takes its first decrement next cycle); (3) grow the
// Cloud core pool if saturated; (4) battery/energy accounting, with dead
// devices shedding their tasks per the battery-death policy.
AdvanceResult advance_execution(SimState& state, double cycle_duration_s,
                                const AdvanceOptions& options = {});

struct FinalizedApp {
  std::string app_id;
  uint64_t completion_cycle = 0;
  uint64_t first_delivery_cycle = 0;
  uint64_t makespan_cycles = 0;
  bool deadline_met = true;
};

// Archives every application whose tasks are all delivered and finished.
std::vector<FinalizedApp> finalize_applications_detailed(SimState& state);
std::vector<std::string> finalize_applications(SimState& state);

// Deep immutable copy of everything schedulers may consult.
sched::Snapshot make_snapshot(const SimState& state);

// ---------------------------------------------------------------------------
// Environment: owns the state and runs the cycle loop
// ---------------------------------------------------------------------------

class Environment {
public:
  // Generates the workload and fleet from gen_cfg (datagen stream of
  // engine_cfg.seed), wires dataflow and the agent pool, and populates the
  // state with devices and empty ledgers.
  Environment(const datagen::GenConfig& gen_cfg, const EngineConfig& engine_cfg,
              const SchedulerConfig& sched_cfg, EventSink* sink = nullptr);

  // Same, but with a pre-built workload (e.g. loaded from CSV). gen_cfg still
  // supplies the per-tier distributions for churn-added devices.
  Environment(datagen::Workload workload, const datagen::GenConfig& gen_cfg,
              const EngineConfig& engine_cfg, const SchedulerConfig& sched_cfg,
              EventSink* sink = nullptr);

  // deliver -> preprocess -> propose -> commit -> advance -> churn ->
  // monitor; increments the cycle counter and records metrics.
  CycleReport step();

  // True once total_cycles were run, or (unless exact_cycles) when the
  // workload is exhausted and every delivered app has finished.
  bool done() const;

  // Steps until done(); returns the number of cycles run in this call.
  uint64_t run();

  const SimState& state() const { return state_; }
  sched::Snapshot snapshot() const { return make_snapshot(state_); }
  const EngineConfig& config() const { return cfg_; }
  metrics::MetricsStore& metrics_store() { return store_; }
  const metrics::MetricsStore& metrics_store() const { return store_; }
  const churn::ChurnHistory& churn_history() const { return churn_history_; }
  const std::vector<ApplicationSpec>& applications() const { return apps_; }
  uint64_t initial_fleet_size() const { return initial_fleet_size_; }

private:
  void init_state();

  datagen::GenConfig gen_cfg_;
  EngineConfig cfg_;
  SchedulerConfig sched_cfg_;

  std::vector<ApplicationSpec> apps_;
  std::vector<DeviceSpec> initial_devices_;
  struct AppMeta {
    uint64_t total_tasks;
    uint64_t deadline_cycles;
  };
  std::unordered_map<std::string, AppMeta> app_meta_;
  dataflow::WorkloadCursor cursor_;
  dataflow::AppGraphIndex graph_index_;

  SimState state_;
  sched::AgentPool pool_;
  churn::ChurnHistory churn_history_;
  metrics::MetricsStore store_;
  EventSink* sink_ = nullptr;

  Rng window_rng_;
  Rng churn_rng_;
  uint64_t initial_fleet_size_ = 0;
};

} // namespace schedge::engine
