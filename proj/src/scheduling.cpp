#include "schedge/scheduling.hpp"

#include <algorithm>
#include <atomic>
#include <iostream>
#include <map>
#include <mutex>
#include <thread>

#include "schedge/error.hpp"

namespace schedge::sched {

const DeviceView* Snapshot::find_device(const std::string& id) const {
  auto it = std::lower_bound(devices.begin(), devices.end(), id,
                             [](const DeviceView& d, const std::string& v) {
                               return d.device_id < v;
                             });
  if (it == devices.end() || it->device_id != id) return nullptr;
  return &*it;
}

bool feasible_target(const DeviceView& dev, const CoreView& core, const TaskSpec& task) {
  return dev.schedulable && task.safety_level <= dev.safety_capability && !core.queue_full();
}

const char* commit_status_name(CommitStatus status) {
  switch (status) {
    case CommitStatus::accepted: return "accepted";
    case CommitStatus::queue_full: return "queue_full";
    case CommitStatus::battery_depleted: return "battery_depleted";
    case CommitStatus::safety_violation: return "safety_violation";
    case CommitStatus::unknown_device: return "unknown_device";
    case CommitStatus::unready: return "unready";
  }
  return "?";
}

std::vector<std::vector<const TaskSpec*>> partition_by_app(
    const std::vector<const TaskSpec*>& ready, uint32_t num_agents) {
  if (num_agents == 0) throw config_error("partition_by_app: num_agents must be >= 1");

  std::vector<std::string> app_ids;
  for (const auto* task : ready) app_ids.push_back(task->app_id);
  std::sort(app_ids.begin(), app_ids.end());
  app_ids.erase(std::unique(app_ids.begin(), app_ids.end()), app_ids.end());

  std::unordered_map<std::string, uint32_t> owner;
  owner.reserve(app_ids.size());
  for (size_t i = 0; i < app_ids.size(); ++i) {
    owner.emplace(app_ids[i], static_cast<uint32_t>(i % num_agents));
  }

  std::vector<std::vector<const TaskSpec*>> shares(num_agents);
  for (const auto* task : ready) shares[owner.at(task->app_id)].push_back(task);
  return shares;
}

AgentPool::AgentPool(std::vector<std::unique_ptr<Scheduler>> agents, uint32_t worker_threads)
    : agents_(std::move(agents)) {
  if (agents_.empty()) throw config_error("AgentPool requires at least one agent");
  if (worker_threads == 0) {
    unsigned hw = std::thread::hardware_concurrency();
    worker_threads = static_cast<uint32_t>(std::min<size_t>(agents_.size(), hw ? hw : 1));
  }
  workers_ = worker_threads;
}

std::vector<Assignment> AgentPool::run(
    const Snapshot& snapshot, const std::vector<std::vector<const TaskSpec*>>& partition) {
  if (partition.size() != agents_.size()) {
    throw config_error("partition size does not match agent count");
  }

  std::vector<std::vector<Assignment>> slots(agents_.size());
  auto run_one = [&](size_t i) {
    try {
      slots[i] = agents_[i]->propose(snapshot, partition[i]);
    } catch (const std::exception& e) {
      static std::mutex log_mutex;
      std::lock_guard<std::mutex> lock(log_mutex);
      std::cerr << "warning: agent " << i << " (" << agents_[i]->name()
                << ") failed to propose: " << e.what() << "\n";
      slots[i].clear();
    }
  };

  uint32_t workers = std::min<uint32_t>(workers_, static_cast<uint32_t>(agents_.size()));
  if (workers <= 1) {
    for (size_t i = 0; i < agents_.size(); ++i) run_one(i);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (uint32_t w = 0; w < workers; ++w) {
      threads.emplace_back([&] {
        for (size_t i = next.fetch_add(1); i < agents_.size(); i = next.fetch_add(1)) run_one(i);
      });
    }
    for (auto& t : threads) t.join();
  }

  // Merge ascending agent_id; per-agent order preserved. Attribution is
  // stamped here so a misbehaving agent cannot spoof another slot.
  std::vector<Assignment> merged;
  for (size_t i = 0; i < slots.size(); ++i) {
    for (auto& a : slots[i]) {
      a.agent_id = static_cast<uint32_t>(i);
      merged.push_back(std::move(a));
    }
  }
  return merged;
}

void AgentPool::feedback(uint64_t cycle,
                         const std::vector<std::vector<TaskOutcome>>& outcomes_by_agent,
                         double reward) {
  for (size_t i = 0; i < agents_.size(); ++i) {
    static const std::vector<TaskOutcome> kEmpty;
    const auto& outcomes = i < outcomes_by_agent.size() ? outcomes_by_agent[i] : kEmpty;
    agents_[i]->feedback(cycle, outcomes, reward);
  }
}

double reward_signal(const CycleOutcomes& outcomes, const RewardWeights& weights) {
  if (weights.scheduled < 0 || weights.rejected < 0 || weights.energy < 0 ||
      weights.deadline < 0) {
    throw config_error("reward weights must be non-negative");
  }
  return weights.scheduled * static_cast<double>(outcomes.accepted) -
         weights.rejected * static_cast<double>(outcomes.rejected) -
         weights.energy * outcomes.energy_wh -
         weights.deadline * static_cast<double>(outcomes.deadline_misses);
}

// ---------------------------------------------------------------------------
// Baseline policies
// ---------------------------------------------------------------------------

namespace {

class RandomScheduler final : public Scheduler {
public:
  RandomScheduler(uint32_t agent_id, uint64_t seed) : agent_id_(agent_id), rng_(seed) {}

  std::vector<Assignment> propose(const Snapshot& snapshot,
                                  const std::vector<const TaskSpec*>& tasks) override {
    std::vector<Assignment> out;
    std::vector<std::pair<size_t, uint32_t>> feasible; // (device index, core index)
    for (const auto* task : tasks) {
      feasible.clear();
      for (size_t d = 0; d < snapshot.devices.size(); ++d) {
        const auto& dev = snapshot.devices[d];
        for (uint32_t c = 0; c < dev.cores.size(); ++c) {
          if (feasible_target(dev, dev.cores[c], *task)) feasible.emplace_back(d, c);
        }
      }
      if (feasible.empty()) continue;
      auto [d, c] = feasible[rng_.index(feasible.size())];
      out.push_back(Assignment{task->task_id, snapshot.devices[d].device_id, c, agent_id_});
    }
    return out;
  }

  std::string_view name() const override { return "random"; }

private:
  uint32_t agent_id_;
  Rng rng_;
};

// Earliest-finish-time greedy. Estimated finish on a core is its backlog
// (remaining cycles of the running task + queued execution cycles, plus this
// agent's earlier proposals) + ceil(load/speed). Ties resolve to the lowest
// (device_id, core_index).
class GreedyEftScheduler final : public Scheduler {
public:
  GreedyEftScheduler(uint32_t agent_id, uint64_t /*seed*/) : agent_id_(agent_id) {}

  std::vector<Assignment> propose(const Snapshot& snapshot,
                                  const std::vector<const TaskSpec*>& tasks) override {
    std::vector<Assignment> out;
    if (tasks.empty()) return out;

    // Working copy of per-core backlog and occupancy, charged with our own
    // proposals as we go. best[d] caches the device's cheapest usable core.
    size_t nd = snapshot.devices.size();
    std::vector<std::vector<uint64_t>> backlog(nd);
    std::vector<std::vector<uint32_t>> occupancy(nd);
    std::vector<size_t> best(nd);
    for (size_t d = 0; d < nd; ++d) {
      const auto& cores = snapshot.devices[d].cores;
      backlog[d].resize(cores.size());
      occupancy[d].resize(cores.size());
      for (size_t c = 0; c < cores.size(); ++c) {
        backlog[d][c] = cores[c].backlog_cycles();
        occupancy[d][c] = cores[c].queue_length;
      }
      best[d] = best_core(snapshot.devices[d], backlog[d], occupancy[d]);
    }

    for (const auto* task : tasks) {
      size_t chosen_d = SIZE_MAX;
      size_t chosen_c = 0;
      uint64_t chosen_finish = 0;
      for (size_t d = 0; d < nd; ++d) {
        const auto& dev = snapshot.devices[d];
        if (!dev.schedulable || task->safety_level > dev.safety_capability) continue;
        size_t c = best[d];
        if (c == SIZE_MAX) continue; // all cores full
        uint64_t finish = backlog[d][c] + exec_cycles(task->compute_load, dev.cores[c].speed);
        if (chosen_d == SIZE_MAX || finish < chosen_finish) {
          chosen_d = d;
          chosen_c = c;
          chosen_finish = finish;
        }
      }
      if (chosen_d == SIZE_MAX) continue;

      const auto& dev = snapshot.devices[chosen_d];
      out.push_back(Assignment{task->task_id, dev.device_id,
                               static_cast<uint32_t>(chosen_c), agent_id_});
      backlog[chosen_d][chosen_c] +=
          exec_cycles(task->compute_load, dev.cores[chosen_c].speed);
      occupancy[chosen_d][chosen_c] += 1;
      best[chosen_d] = best_core(dev, backlog[chosen_d], occupancy[chosen_d]);
    }
    return out;
  }

  std::string_view name() const override { return "greedy_eft"; }

private:
  // Lowest-backlog core that still has queue room; SIZE_MAX if none. Cores of
  // a device share one speed, so backlog order equals finish order.
  static size_t best_core(const DeviceView& dev, const std::vector<uint64_t>& backlog,
                          const std::vector<uint32_t>& occupancy) {
    size_t best = SIZE_MAX;
    for (size_t c = 0; c < dev.cores.size(); ++c) {
      uint32_t cap = dev.cores[c].queue_capacity;
      if (cap != 0 && occupancy[c] >= cap) continue;
      if (best == SIZE_MAX || backlog[c] < backlog[best]) best = c;
    }
    return best;
  }

  uint32_t agent_id_;
};

// Minimizes active_power_w * ceil(load/speed); the cycle duration is a common
// factor and drops out. Ties resolve to earliest finish, then lowest ids.
class MinEnergyScheduler final : public Scheduler {
public:
  MinEnergyScheduler(uint32_t agent_id, uint64_t /*seed*/) : agent_id_(agent_id) {}

  std::vector<Assignment> propose(const Snapshot& snapshot,
                                  const std::vector<const TaskSpec*>& tasks) override {
    std::vector<Assignment> out;
    for (const auto* task : tasks) {
      const DeviceView* chosen_dev = nullptr;
      uint32_t chosen_core = 0;
      double chosen_energy = 0;
      uint64_t chosen_finish = 0;
      for (const auto& dev : snapshot.devices) {
        if (!dev.schedulable || task->safety_level > dev.safety_capability) continue;
        for (uint32_t c = 0; c < dev.cores.size(); ++c) {
          const auto& core = dev.cores[c];
          if (core.queue_full()) continue;
          double energy = dev.active_power_w *
                          static_cast<double>(exec_cycles(task->compute_load, core.speed));
          uint64_t finish = core.backlog_cycles() + exec_cycles(task->compute_load, core.speed);
          bool better = chosen_dev == nullptr || energy < chosen_energy ||
                        (energy == chosen_energy && finish < chosen_finish);
          if (better) {
            chosen_dev = &dev;
            chosen_core = c;
            chosen_energy = energy;
            chosen_finish = finish;
          }
        }
      }
      if (chosen_dev) {
        out.push_back(Assignment{task->task_id, chosen_dev->device_id, chosen_core, agent_id_});
      }
    }
    return out;
  }

  std::string_view name() const override { return "min_energy"; }

private:
  uint32_t agent_id_;
};

std::map<std::string, SchedulerFactory>& registry() {
  static std::map<std::string, SchedulerFactory> reg = {
      {"random",
       [](uint32_t id, uint64_t seed) { return std::make_unique<RandomScheduler>(id, seed); }},
      {"greedy_eft",
       [](uint32_t id, uint64_t seed) { return std::make_unique<GreedyEftScheduler>(id, seed); }},
      {"min_energy",
       [](uint32_t id, uint64_t seed) { return std::make_unique<MinEnergyScheduler>(id, seed); }},
  };
  return reg;
}

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

} // namespace

void register_scheduler(const std::string& name, SchedulerFactory factory) {
  std::lock_guard<std::mutex> lock(registry_mutex());
  registry()[name] = std::move(factory);
}

std::unique_ptr<Scheduler> make_scheduler(const std::string& name, uint32_t agent_id,
                                          uint64_t seed) {
  SchedulerFactory factory;
  {
    std::lock_guard<std::mutex> lock(registry_mutex());
    auto it = registry().find(name);
    if (it == registry().end()) {
      std::string names;
      for (const auto& [key, _] : registry()) {
        if (!names.empty()) names += ", ";
        names += key;
      }
      throw config_error("unknown scheduler '" + name + "'; valid names: " + names);
    }
    factory = it->second;
  }
  // Invoked outside the lock so factories may delegate to make_scheduler.
  return factory(agent_id, seed);
}

std::vector<std::string> scheduler_names() {
  std::lock_guard<std::mutex> lock(registry_mutex());
  std::vector<std::string> names;
  for (const auto& [key, _] : registry()) names.push_back(key);
  return names;
}

AgentPool make_agent_pool(const std::string& name, uint32_t count, uint64_t master_seed,
                          uint32_t worker_threads) {
  if (count == 0) throw config_error("agent count must be >= 1");
  std::vector<std::unique_ptr<Scheduler>> agents;
  agents.reserve(count);
  for (uint32_t i = 0; i < count; ++i) {
    agents.push_back(make_scheduler(name, i, derive_seed(master_seed, rng_stream::agent_base + i)));
  }
  return AgentPool(std::move(agents), worker_threads);
}

} // namespace schedge::sched
