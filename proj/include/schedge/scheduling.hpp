#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "schedge/model.hpp"
#include "schedge/rng.hpp"

namespace schedge::sched {

inline uint64_t exec_cycles(uint64_t compute_load, uint32_t speed) {
  return (compute_load + speed - 1) / speed;
}

// ---------------------------------------------------------------------------
// Snapshot: the immutable state view handed to scheduler agents
// ---------------------------------------------------------------------------

struct CoreView {
  uint32_t speed = 1;
  uint32_t queue_capacity = 0; // 0 = unbounded
  uint32_t queue_length = 0;
  bool busy = false;
  uint64_t running_remaining_cycles = 0; // 0 when idle
  uint64_t queued_exec_cycles = 0;       // sum of ceil(load/speed) over the queue

  bool queue_full() const { return queue_capacity != 0 && queue_length >= queue_capacity; }
  // Cycles until this core would start a task enqueued now.
  uint64_t backlog_cycles() const { return running_remaining_cycles + queued_exec_cycles; }

  bool operator==(const CoreView&) const = default;
};

struct DeviceView {
  std::string device_id;
  Tier tier = Tier::IoT;
  bool has_battery = false;
  double battery_wh = 0.0;
  bool schedulable = true;
  uint8_t safety_capability = 0;
  double active_power_w = 0.0;
  double idle_power_w = 0.0;
  std::vector<CoreView> cores;

  bool operator==(const DeviceView&) const = default;
};

struct Snapshot {
  uint64_t cycle = 0;
  uint64_t delivered_count = 0;
  std::vector<DeviceView> devices; // ascending device_id
  std::vector<std::string> remaining;
  std::vector<std::pair<std::string, Placement>> running;
  std::vector<std::string> finished;

  const DeviceView* find_device(const std::string& id) const;

  bool operator==(const Snapshot&) const = default;
};

// Commit constraints as visible in a snapshot; the engine applies the same
// rules against live state.
bool feasible_target(const DeviceView& dev, const CoreView& core, const TaskSpec& task);

// ---------------------------------------------------------------------------
// Scheduler contract
// ---------------------------------------------------------------------------

enum class CommitStatus : uint8_t {
  accepted,
  queue_full,
  battery_depleted,
  safety_violation,
  unknown_device,
  unready,
};

const char* commit_status_name(CommitStatus status);

struct TaskOutcome {
  Assignment assignment;
  CommitStatus status = CommitStatus::accepted;
};

// Pluggable scheduling policy. propose() must not mutate the snapshot and may
// run concurrently with other agents; feedback() is invoked sequentially by
// the engine after commit with this agent's outcomes and the shared per-cycle
// reward.
class Scheduler {
public:
  virtual ~Scheduler() = default;
  virtual std::vector<Assignment> propose(const Snapshot& snapshot,
                                          const std::vector<const TaskSpec*>& tasks) = 0;
  virtual void feedback(uint64_t cycle, const std::vector<TaskOutcome>& outcomes, double reward) {
    (void)cycle;
    (void)outcomes;
    (void)reward;
  }
  virtual std::string_view name() const = 0;
};

// ---------------------------------------------------------------------------
// Multi-agent runner
// ---------------------------------------------------------------------------

// Groups ready tasks by application and deals applications round-robin over
// agents in ascending app_id order; within an agent the prioritized task
// order is preserved. Result has exactly num_agents entries.
std::vector<std::vector<const TaskSpec*>> partition_by_app(
    const std::vector<const TaskSpec*>& ready, uint32_t num_agents);

class AgentPool {
public:
  // worker_threads: 0 picks min(agents, hardware_concurrency); 1 runs inline.
  explicit AgentPool(std::vector<std::unique_ptr<Scheduler>> agents, uint32_t worker_threads = 0);

  size_t size() const { return agents_.size(); }
  Scheduler& agent(size_t i) { return *agents_[i]; }

  // Runs every agent's propose over its partition share and concatenates the
  // proposals in ascending agent_id. The merge is independent of thread
  // interleaving; a throwing agent contributes an empty list.
  std::vector<Assignment> run(const Snapshot& snapshot,
                              const std::vector<std::vector<const TaskSpec*>>& partition);

  void feedback(uint64_t cycle, const std::vector<std::vector<TaskOutcome>>& outcomes_by_agent,
                double reward);

private:
  std::vector<std::unique_ptr<Scheduler>> agents_;
  uint32_t workers_;
};

// ---------------------------------------------------------------------------
// Reward channel
// ---------------------------------------------------------------------------

struct RewardWeights {
  double scheduled = 1.0;
  double rejected = 1.0;
  double energy = 0.0;
  double deadline = 0.0;
};

struct CycleOutcomes {
  uint64_t accepted = 0;
  uint64_t rejected = 0;
  double energy_wh = 0.0;
  uint64_t deadline_misses = 0;
};

// Weighted sum: +scheduled per accept, -rejected per reject, -energy per Wh
// spent this cycle, -deadline per miss. Weights must be non-negative.
double reward_signal(const CycleOutcomes& outcomes, const RewardWeights& weights);

// ---------------------------------------------------------------------------
// Registry and baseline policies
// ---------------------------------------------------------------------------

using SchedulerFactory = std::function<std::unique_ptr<Scheduler>(uint32_t agent_id, uint64_t seed)>;

// Bundled policies register themselves under "random", "greedy_eft" and
// "min_energy"; external policies can claim further names.
void register_scheduler(const std::string& name, SchedulerFactory factory);
std::unique_ptr<Scheduler> make_scheduler(const std::string& name, uint32_t agent_id,
                                          uint64_t seed);
std::vector<std::string> scheduler_names();

// Pool of `count` same-policy agents with per-agent derived seeds.
AgentPool make_agent_pool(const std::string& name, uint32_t count, uint64_t master_seed,
                          uint32_t worker_threads = 0);

} // namespace schedge::sched
