#include "schedge/model.hpp"

#include <algorithm>
#include <queue>

#include "schedge/error.hpp"

namespace schedge {

const char* tier_name(Tier tier) {
  switch (tier) {
    case Tier::IoT: return "IoT";
    case Tier::MEC: return "MEC";
    case Tier::Cloud: return "Cloud";
  }
  return "?";
}

std::optional<Tier> tier_from_name(const std::string& name) {
  if (name == "IoT") return Tier::IoT;
  if (name == "MEC") return Tier::MEC;
  if (name == "Cloud") return Tier::Cloud;
  return std::nullopt;
}

void SimState::deliver_task(const TaskSpec& task, uint64_t at_cycle) {
  (void)at_cycle;
  tasks.emplace(task.task_id, task);
  remaining.insert(task.task_id);
  ++delivered_count;
  auto it = active_apps.find(task.app_id);
  if (it == active_apps.end()) {
    throw invariant_error("delivered task " + task.task_id + " for unregistered app " +
                          task.app_id);
  }
  ++it->second.delivered;
}

void SimState::register_app(const std::string& app_id, uint64_t total_tasks,
                            uint64_t deadline_cycles, uint64_t at_cycle) {
  AppProgress progress;
  progress.total_tasks = total_tasks;
  progress.deadline_cycles = deadline_cycles;
  progress.first_delivery_cycle = at_cycle;
  active_apps.emplace(app_id, progress);
}

const char* violation_name(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::empty_application: return "empty_application";
    case ViolationKind::duplicate_task_id: return "duplicate_task_id";
    case ViolationKind::app_id_mismatch: return "app_id_mismatch";
    case ViolationKind::bad_compute_load: return "bad_compute_load";
    case ViolationKind::bad_io_size: return "bad_io_size";
    case ViolationKind::bad_safety_level: return "bad_safety_level";
    case ViolationKind::self_reference: return "self_reference";
    case ViolationKind::dangling_predecessor: return "dangling_predecessor";
    case ViolationKind::dependency_cycle: return "dependency_cycle";
  }
  return "?";
}

namespace {

// DFS cycle search; returns the task ids of the first cycle found.
std::vector<std::string> find_cycle(const ApplicationSpec& app) {
  // Successor adjacency over task indices.
  std::unordered_map<std::string, size_t> index;
  index.reserve(app.tasks.size());
  for (size_t i = 0; i < app.tasks.size(); ++i) index.emplace(app.tasks[i].task_id, i);

  std::vector<std::vector<size_t>> succ(app.tasks.size());
  for (size_t i = 0; i < app.tasks.size(); ++i) {
    for (const auto& pred : app.tasks[i].predecessors) {
      auto it = index.find(pred);
      if (it != index.end() && it->second != i) succ[it->second].push_back(i);
    }
  }

  enum class Color : uint8_t { white, gray, black };
  std::vector<Color> color(app.tasks.size(), Color::white);
  std::vector<size_t> parent(app.tasks.size(), SIZE_MAX);

  for (size_t root = 0; root < app.tasks.size(); ++root) {
    if (color[root] != Color::white) continue;
    // Iterative DFS with an explicit stack of (node, next child index).
    std::vector<std::pair<size_t, size_t>> stack{{root, 0}};
    color[root] = Color::gray;
    while (!stack.empty()) {
      auto& [node, child] = stack.back();
      if (child < succ[node].size()) {
        size_t next = succ[node][child++];
        if (color[next] == Color::gray) {
          // Back edge: walk the gray chain back from `node` to `next`.
          std::vector<std::string> cycle{app.tasks[next].task_id};
          for (size_t v = node; v != next; v = parent[v]) cycle.push_back(app.tasks[v].task_id);
          std::sort(cycle.begin(), cycle.end());
          return cycle;
        }
        if (color[next] == Color::white) {
          color[next] = Color::gray;
          parent[next] = node;
          stack.emplace_back(next, 0);
        }
      } else {
        color[node] = Color::black;
        stack.pop_back();
      }
    }
  }
  return {};
}

} // namespace

std::vector<Violation> validate_application(const ApplicationSpec& app) {
  std::vector<Violation> out;
  auto add = [&](ViolationKind kind, std::vector<std::string> ids, std::string message) {
    out.push_back(Violation{kind, std::move(ids), std::move(message)});
  };

  if (app.tasks.empty()) {
    add(ViolationKind::empty_application, {}, "application " + app.app_id + " has no tasks");
    return out;
  }

  std::unordered_set<std::string> ids;
  ids.reserve(app.tasks.size());
  for (const auto& task : app.tasks) {
    if (!ids.insert(task.task_id).second) {
      add(ViolationKind::duplicate_task_id, {task.task_id},
          "duplicate task id " + task.task_id);
    }
  }

  for (const auto& task : app.tasks) {
    if (task.app_id != app.app_id) {
      add(ViolationKind::app_id_mismatch, {task.task_id},
          "task " + task.task_id + " claims app " + task.app_id + ", expected " + app.app_id);
    }
    if (task.compute_load < 1) {
      add(ViolationKind::bad_compute_load, {task.task_id},
          "task " + task.task_id + " has compute_load 0");
    }
    if (task.input_size_mb < 1 || task.input_size_mb > 1024 || task.output_size_mb < 1 ||
        task.output_size_mb > 1024) {
      add(ViolationKind::bad_io_size, {task.task_id},
          "task " + task.task_id + " I/O size outside [1, 1024] MB");
    }
    if (task.safety_level > 3) {
      add(ViolationKind::bad_safety_level, {task.task_id},
          "task " + task.task_id + " safety level outside [0, 3]");
    }
    for (const auto& pred : task.predecessors) {
      if (pred == task.task_id) {
        add(ViolationKind::self_reference, {task.task_id},
            "task " + task.task_id + " lists itself as predecessor");
      } else if (!ids.contains(pred)) {
        add(ViolationKind::dangling_predecessor, {task.task_id, pred},
            "task " + task.task_id + " references unknown predecessor " + pred);
      }
    }
  }

  auto cycle = find_cycle(app);
  if (!cycle.empty()) {
    std::string msg = "dependency cycle:";
    for (const auto& id : cycle) msg += " " + id;
    add(ViolationKind::dependency_cycle, cycle, msg);
  }

  return out;
}

std::vector<std::string> topological_order(const ApplicationSpec& app) {
  std::unordered_map<std::string, size_t> index;
  index.reserve(app.tasks.size());
  for (size_t i = 0; i < app.tasks.size(); ++i) index.emplace(app.tasks[i].task_id, i);

  std::vector<std::vector<size_t>> succ(app.tasks.size());
  std::vector<size_t> pending(app.tasks.size(), 0);
  for (size_t i = 0; i < app.tasks.size(); ++i) {
    for (const auto& pred : app.tasks[i].predecessors) {
      auto it = index.find(pred);
      if (it == index.end()) {
        throw config_error("topological_order: task " + app.tasks[i].task_id +
                           " references unknown predecessor " + pred);
      }
      succ[it->second].push_back(i);
      ++pending[i];
    }
  }

  // Kahn's algorithm; min-heap on task_id breaks ties deterministically.
  auto by_id = [&](size_t a, size_t b) { return app.tasks[a].task_id > app.tasks[b].task_id; };
  std::priority_queue<size_t, std::vector<size_t>, decltype(by_id)> ready(by_id);
  for (size_t i = 0; i < app.tasks.size(); ++i) {
    if (pending[i] == 0) ready.push(i);
  }

  std::vector<std::string> order;
  order.reserve(app.tasks.size());
  while (!ready.empty()) {
    size_t node = ready.top();
    ready.pop();
    order.push_back(app.tasks[node].task_id);
    for (size_t next : succ[node]) {
      if (--pending[next] == 0) ready.push(next);
    }
  }
  if (order.size() != app.tasks.size()) {
    throw config_error("topological_order: dependency cycle in application " + app.app_id);
  }
  return order;
}

} // namespace schedge
