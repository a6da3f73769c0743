#include "schedge/dataflow.hpp"

#include <algorithm>

#include "schedge/error.hpp"

namespace schedge::dataflow {

void validate_window_config(const WindowConfig& cfg) {
  if (cfg.interval_cycles == 0 || cfg.max_tasks == 0 || cfg.max_apps == 0) {
    throw config_error("window config fields must be positive");
  }
}

WorkloadCursor::WorkloadCursor(std::span<const ApplicationSpec> apps) {
  for (const auto& app : apps) {
    if (app.tasks.empty()) continue;
    backlog_.push_back(PendingApp{&app, 0});
    undelivered_ += app.tasks.size();
  }
}

std::vector<TaskSpec> next_window(WorkloadCursor& cursor, const WindowConfig& cfg, uint64_t cycle,
                                  Rng& rng) {
  std::vector<TaskSpec> batch;
  if (cycle % cfg.interval_cycles != 0) return batch;

  uint32_t apps_used = 0;
  while (!cursor.backlog_.empty() && apps_used < cfg.max_apps && batch.size() < cfg.max_tasks) {
    auto& head = cursor.backlog_.front();
    size_t room = cfg.max_tasks - batch.size();
    size_t available = head.app->tasks.size() - head.next_task;
    size_t take = std::min(room, available);
    for (size_t i = 0; i < take; ++i) batch.push_back(head.app->tasks[head.next_task + i]);
    head.next_task += take;
    cursor.undelivered_ -= take;
    ++apps_used;
    if (head.next_task == head.app->tasks.size()) {
      cursor.backlog_.pop_front();
    } else {
      break; // window full; remainder leads the next window
    }
  }

  rng.shuffle(batch);
  return batch;
}

std::vector<TaskSpec> filter_ready(const SimState& state,
                                   const std::vector<TaskSpec>& candidates) {
  std::vector<TaskSpec> ready;
  for (const auto& task : candidates) {
    if (!state.remaining.contains(task.task_id)) {
      throw config_error("filter_ready: task " + task.task_id + " is not in the remaining ledger");
    }
    if (state.is_ready(task)) ready.push_back(task);
  }
  return ready;
}

std::vector<const TaskSpec*> ready_tasks(const SimState& state) {
  std::vector<const TaskSpec*> ready;
  for (const auto& id : state.remaining) {
    const TaskSpec& task = state.tasks.at(id);
    if (state.is_ready(task)) ready.push_back(&task);
  }
  return ready;
}

namespace {

// Descendant counts via reverse DFS from every node; applications are small
// (tens of tasks), so the quadratic walk is fine.
void add_transitive_counts(const ApplicationSpec& app, AppGraphIndex& index) {
  std::unordered_map<std::string, size_t> id_to_pos;
  for (size_t i = 0; i < app.tasks.size(); ++i) id_to_pos.emplace(app.tasks[i].task_id, i);

  std::vector<std::vector<size_t>> succ(app.tasks.size());
  for (size_t i = 0; i < app.tasks.size(); ++i) {
    for (const auto& pred : app.tasks[i].predecessors) {
      auto it = id_to_pos.find(pred);
      if (it != id_to_pos.end()) succ[it->second].push_back(i);
    }
  }

  std::vector<char> seen(app.tasks.size());
  std::vector<size_t> stack;
  for (size_t start = 0; start < app.tasks.size(); ++start) {
    std::fill(seen.begin(), seen.end(), 0);
    stack.assign(succ[start].begin(), succ[start].end());
    uint32_t count = 0;
    while (!stack.empty()) {
      size_t node = stack.back();
      stack.pop_back();
      if (seen[node]) continue;
      seen[node] = 1;
      ++count;
      stack.insert(stack.end(), succ[node].begin(), succ[node].end());
    }
    index.successor_count.emplace(app.tasks[start].task_id, count);
  }
}

} // namespace

AppGraphIndex build_graph_index(std::span<const ApplicationSpec> apps, PriorityMode mode) {
  AppGraphIndex index;
  if (mode == PriorityMode::transitive_successors) {
    for (const auto& app : apps) add_transitive_counts(app, index);
    return index;
  }
  for (const auto& app : apps) {
    for (const auto& task : app.tasks) index.successor_count.emplace(task.task_id, 0);
    for (const auto& task : app.tasks) {
      for (const auto& pred : task.predecessors) {
        auto it = index.successor_count.find(pred);
        if (it != index.successor_count.end()) ++it->second;
      }
    }
  }
  return index;
}

namespace {

uint32_t successors_of(const AppGraphIndex& index, const std::string& task_id) {
  auto it = index.successor_count.find(task_id);
  if (it == index.successor_count.end()) {
    throw config_error("prioritize: task " + task_id + " is not in the application graph index");
  }
  return it->second;
}

} // namespace

std::vector<TaskSpec> prioritize(const std::vector<TaskSpec>& ready, const AppGraphIndex& index) {
  std::vector<TaskSpec> out = ready;
  for (const auto& task : out) successors_of(index, task.task_id); // validate up front
  std::sort(out.begin(), out.end(), [&](const TaskSpec& a, const TaskSpec& b) {
    uint32_t sa = index.successor_count.at(a.task_id);
    uint32_t sb = index.successor_count.at(b.task_id);
    if (sa != sb) return sa > sb;
    return a.task_id < b.task_id;
  });
  return out;
}

std::vector<const TaskSpec*> prioritize_ptrs(std::vector<const TaskSpec*> ready,
                                             const AppGraphIndex& index) {
  for (const auto* task : ready) successors_of(index, task->task_id);
  std::sort(ready.begin(), ready.end(), [&](const TaskSpec* a, const TaskSpec* b) {
    uint32_t sa = index.successor_count.at(a->task_id);
    uint32_t sb = index.successor_count.at(b->task_id);
    if (sa != sb) return sa > sb;
    return a->task_id < b->task_id;
  });
  return ready;
}

} // namespace schedge::dataflow
