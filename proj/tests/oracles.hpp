// Independent reference implementations used to cross-check the simulator.
// Everything here is deliberately brute-force and shares no code with the
// library paths it validates.
#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "schedge/model.hpp"

namespace oracle {

// Recursive three-color DFS acyclicity check over predecessor edges.
inline bool is_acyclic(const schedge::ApplicationSpec& app) {
  std::unordered_map<std::string, int> color; // 0 white, 1 gray, 2 black
  std::unordered_map<std::string, std::vector<std::string>> preds;
  for (const auto& task : app.tasks) {
    color[task.task_id] = 0;
    preds[task.task_id] = task.predecessors;
  }
  std::function<bool(const std::string&)> visit = [&](const std::string& id) {
    color[id] = 1;
    for (const auto& pred : preds[id]) {
      auto it = color.find(pred);
      if (it == color.end()) continue;
      if (it->second == 1) return false;
      if (it->second == 0 && !visit(pred)) return false;
    }
    color[id] = 2;
    return true;
  };
  for (const auto& task : app.tasks) {
    if (color[task.task_id] == 0 && !visit(task.task_id)) return false;
  }
  return true;
}

// Checks that `order` is a permutation of the app's tasks with every task
// after all of its predecessors.
inline bool is_topological(const schedge::ApplicationSpec& app,
                           const std::vector<std::string>& order) {
  if (order.size() != app.tasks.size()) return false;
  std::unordered_map<std::string, size_t> position;
  for (size_t i = 0; i < order.size(); ++i) {
    if (!position.emplace(order[i], i).second) return false;
  }
  for (const auto& task : app.tasks) {
    auto self = position.find(task.task_id);
    if (self == position.end()) return false;
    for (const auto& pred : task.predecessors) {
      auto p = position.find(pred);
      if (p == position.end() || p->second >= self->second) return false;
    }
  }
  return true;
}

// Expected DAG edge count for the permutation + forward-coin construction
// with a connectivity floor: density*C(n,2) + sum_j (1-density)^j.
inline double expected_dag_edges(uint32_t n, double density) {
  double edges = density * static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  double q = 1.0;
  for (uint32_t j = 1; j < n; ++j) {
    q *= 1.0 - density;
    edges += q;
  }
  return edges;
}

// Brute-force readiness: every predecessor appears in the finished list.
inline bool ready_brute_force(const schedge::TaskSpec& task,
                              const std::vector<std::string>& finished) {
  for (const auto& pred : task.predecessors) {
    if (std::find(finished.begin(), finished.end(), pred) == finished.end()) return false;
  }
  return true;
}

// Direct successor counts recomputed from scratch.
inline std::map<std::string, uint32_t> out_degrees(const schedge::ApplicationSpec& app) {
  std::map<std::string, uint32_t> degree;
  for (const auto& task : app.tasks) degree[task.task_id] = 0;
  for (const auto& task : app.tasks) {
    for (const auto& pred : task.predecessors) ++degree[pred];
  }
  return degree;
}

// Longest root-to-leaf path where each node costs ceil(load/max_speed); a
// lower bound on any achievable makespan.
inline uint64_t critical_path_bound(const schedge::ApplicationSpec& app, uint32_t max_speed) {
  std::unordered_map<std::string, const schedge::TaskSpec*> by_id;
  for (const auto& task : app.tasks) by_id[task.task_id] = &task;
  std::unordered_map<std::string, uint64_t> memo;
  std::function<uint64_t(const schedge::TaskSpec&)> longest = [&](const schedge::TaskSpec& task) {
    auto it = memo.find(task.task_id);
    if (it != memo.end()) return it->second;
    uint64_t cost = (task.compute_load + max_speed - 1) / max_speed;
    uint64_t best_pred = 0;
    for (const auto& pred : task.predecessors) {
      best_pred = std::max(best_pred, longest(*by_id.at(pred)));
    }
    uint64_t total = cost + best_pred;
    memo[task.task_id] = total;
    return total;
  };
  uint64_t bound = 0;
  for (const auto& task : app.tasks) bound = std::max(bound, longest(task));
  return bound;
}

// Makespan of a fixed assignment of independent tasks to cores: tasks queue
// FIFO in assignment order, so each core finishes at the sum of its tasks'
// execution cycles; the makespan is the max over cores.
struct CoreKey {
  std::string device_id;
  uint32_t core_index;
  bool operator<(const CoreKey& other) const {
    if (device_id != other.device_id) return device_id < other.device_id;
    return core_index < other.core_index;
  }
};

inline uint64_t fifo_makespan(
    const std::vector<std::pair<CoreKey, uint64_t>>& placed_exec_cycles) {
  std::map<CoreKey, uint64_t> load;
  for (const auto& [key, cycles] : placed_exec_cycles) load[key] += cycles;
  uint64_t makespan = 0;
  for (const auto& [_, total] : load) makespan = std::max(makespan, total);
  return makespan;
}

} // namespace oracle
