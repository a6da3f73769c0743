#pragma once

#include <cstdint>
#include <deque>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "schedge/model.hpp"
#include "schedge/rng.hpp"

namespace schedge::dataflow {

// Windowed delivery: every interval_cycles, up to max_tasks tasks from at
// most max_apps distinct applications.
struct WindowConfig {
  uint32_t interval_cycles = 15;
  uint32_t max_tasks = 1000;
  uint32_t max_apps = 40;
};

void validate_window_config(const WindowConfig& cfg);

// Ordered backlog of not-yet-delivered applications. Applications are drained
// head-first; a partially delivered application keeps its place at the head
// so its remainder leads the next window. Each task is delivered exactly once.
class WorkloadCursor {
public:
  WorkloadCursor() = default;
  // `apps` must outlive the cursor; backlog order is the given order.
  explicit WorkloadCursor(std::span<const ApplicationSpec> apps);

  bool exhausted() const { return backlog_.empty(); }
  uint64_t undelivered_tasks() const { return undelivered_; }

private:
  struct PendingApp {
    const ApplicationSpec* app;
    size_t next_task; // index of the first undelivered task
  };
  std::deque<PendingApp> backlog_;
  uint64_t undelivered_ = 0;

  friend std::vector<TaskSpec> next_window(WorkloadCursor&, const WindowConfig&, uint64_t, Rng&);
};

// Delivers the next window. Empty unless cycle % interval_cycles == 0.
// Applications are taken whole from the backlog head (truncating at
// max_tasks), then the batch is shuffled with `rng`.
std::vector<TaskSpec> next_window(WorkloadCursor& cursor, const WindowConfig& cfg, uint64_t cycle,
                                  Rng& rng);

// Preprocessor, step 1: keep exactly the candidates whose predecessors are
// all finished; input order preserved. Candidates must be in the remaining
// ledger (Error(Errc::config) otherwise).
std::vector<TaskSpec> filter_ready(const SimState& state, const std::vector<TaskSpec>& candidates);

// Engine fast path over the whole remaining ledger (ascending task_id);
// equivalent to filter_ready(state, remaining tasks). Pointers reference the
// state's task catalog.
std::vector<const TaskSpec*> ready_tasks(const SimState& state);

enum class PriorityMode {
  direct_successors,    // out-degree in the task's application DAG
  transitive_successors // descendant count
};

// Successor counts for every task of every application, per the chosen mode.
struct AppGraphIndex {
  std::unordered_map<std::string, uint32_t> successor_count;
};

AppGraphIndex build_graph_index(std::span<const ApplicationSpec> apps, PriorityMode mode);

// Preprocessor, step 2: descending successor count, ties by ascending
// task_id. Unknown tasks raise Error(Errc::config).
std::vector<TaskSpec> prioritize(const std::vector<TaskSpec>& ready, const AppGraphIndex& index);
std::vector<const TaskSpec*> prioritize_ptrs(std::vector<const TaskSpec*> ready,
                                             const AppGraphIndex& index);

} // namespace schedge::dataflow
