#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace schedge {

// ---------------------------------------------------------------------------
// Workload types
// ---------------------------------------------------------------------------

// One node of an application DAG.
struct TaskSpec {
  std::string task_id;
  std::string app_id;
  uint64_t compute_load = 1;   // abstract compute units, >= 1
  uint32_t input_size_mb = 1;  // [1, 1024]
  uint32_t output_size_mb = 1; // [1, 1024]
  uint8_t safety_level = 0;    // [0, 3]
  std::vector<std::string> predecessors; // sorted, unique, same-app task ids

  bool operator==(const TaskSpec&) const = default;
};

// A DAG of tasks plus a deadline relative to the first delivery cycle.
struct ApplicationSpec {
  std::string app_id;
  std::vector<TaskSpec> tasks;
  uint64_t deadline_cycles = 1;

  bool operator==(const ApplicationSpec&) const = default;
};

// ---------------------------------------------------------------------------
// Device types
// ---------------------------------------------------------------------------

enum class Tier : uint8_t { IoT, MEC, Cloud };

const char* tier_name(Tier tier);
std::optional<Tier> tier_from_name(const std::string& name);

struct RunningTask {
  std::string task_id;
  uint64_t remaining_cycles = 0; // >= 1 while running

  bool operator==(const RunningTask&) const = default;
};

// One processing core: FIFO queue feeding a single execution slot.
struct CoreState {
  uint32_t speed = 1;          // compute units per cycle, >= 1
  uint32_t queue_capacity = 1; // 0 means unbounded (Cloud cores)
  std::deque<std::string> queue;
  std::optional<RunningTask> running;
  // Sum of ceil(load/speed) over queued tasks, maintained by the engine on
  // enqueue/dequeue so snapshots need no catalog lookups.
  uint64_t queued_exec_cycles = 0;

  bool queue_full() const {
    return queue_capacity != 0 && queue.size() >= queue_capacity;
  }
  bool busy() const { return running.has_value(); }

  bool operator==(const CoreState&) const = default;
};

struct DeviceSpec {
  std::string device_id;
  Tier tier = Tier::IoT;
  std::vector<CoreState> cores;
  std::optional<double> battery_wh; // present iff tier != Cloud
  double active_power_w = 1.0;      // per busy core
  double idle_power_w = 0.1;        // per idle core
  uint8_t safety_capability = 0;    // [0, 3]

  // A device accepts new work only while it has charge (Cloud always does).
  bool schedulable() const { return !battery_wh.has_value() || *battery_wh > 0.0; }

  bool operator==(const DeviceSpec&) const = default;
};

// ---------------------------------------------------------------------------
// Scheduling types
// ---------------------------------------------------------------------------

// A scheduler's proposal binding a task to a (device, core) pair.
struct Assignment {
  std::string task_id;
  std::string device_id;
  uint32_t core_index = 0;
  uint32_t agent_id = 0;

  bool operator==(const Assignment&) const = default;
};

struct Placement {
  std::string device_id;
  uint32_t core_index = 0;

  bool operator==(const Placement&) const = default;
};

// ---------------------------------------------------------------------------
// Simulation state: the single source of truth
// ---------------------------------------------------------------------------

struct AppProgress {
  uint64_t total_tasks = 0; // size of the application DAG
  uint64_t delivered = 0;
  uint64_t finished = 0;
  uint64_t first_delivery_cycle = 0;
  uint64_t deadline_cycles = 0;
  bool deadline_missed = false;

  bool operator==(const AppProgress&) const = default;
};

struct FinishedApp {
  std::string app_id;
  uint64_t completion_cycle = 0;

  bool operator==(const FinishedApp&) const = default;
};

// Mutated exclusively by the engine thread; everything handed to scheduler
// agents goes through immutable Snapshot copies. Delivered tasks live in
// `tasks` for their whole lifetime; the three id ledgers (remaining, running,
// finished) partition them. `lost` is used only under the drop policy for
// battery deaths and participates in conservation accounting.
struct SimState {
  uint64_t cycle = 0;

  std::map<std::string, TaskSpec> tasks; // catalog of every delivered task
  std::set<std::string> remaining;       // delivered, not yet committed
  std::map<std::string, Placement> running; // committed (queued or executing)
  std::unordered_set<std::string> finished;
  std::set<std::string> lost; // dropped on battery death (drop policy only)

  std::map<std::string, AppProgress> active_apps;
  std::vector<FinishedApp> finished_apps; // append-only archive

  std::map<std::string, DeviceSpec> devices;

  uint64_t delivered_count = 0;

  // Counters for unique churn-added device ids.
  uint64_t next_iot_index = 0;
  uint64_t next_mec_index = 0;

  bool is_ready(const TaskSpec& task) const {
    for (const auto& pred : task.predecessors) {
      if (!finished.contains(pred)) return false;
    }
    return true;
  }

  // delivered = |remaining| + |running| + |finished| (+ |lost| under drop).
  bool conservation_holds() const {
    return delivered_count == remaining.size() + running.size() + finished.size() + lost.size();
  }

  // Adds `task` to the catalog and the remaining ledger, updating per-app
  // progress. The app must already be registered in active_apps.
  void deliver_task(const TaskSpec& task, uint64_t at_cycle);

  void register_app(const std::string& app_id, uint64_t total_tasks, uint64_t deadline_cycles,
                    uint64_t at_cycle);
};

// ---------------------------------------------------------------------------
// Structural validation
// ---------------------------------------------------------------------------

enum class ViolationKind {
  empty_application,
  duplicate_task_id,
  app_id_mismatch,
  bad_compute_load,
  bad_io_size,
  bad_safety_level,
  self_reference,
  dangling_predecessor,
  dependency_cycle,
};

const char* violation_name(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::vector<std::string> ids; // offending task ids
  std::string message;
};

// Returns every invariant violation found; empty means the application is
// structurally valid. Violations are data, not errors.
std::vector<Violation> validate_application(const ApplicationSpec& app);

// Deterministic topological order: every task after all its predecessors,
// ties broken by ascending task_id. Throws Error(Errc::config) mentioning
// "cycle" if the dependency relation is cyclic.
std::vector<std::string> topological_order(const ApplicationSpec& app);

} // namespace schedge
