#include "schedge/engine.hpp"

#include <algorithm>
#include <chrono>

#include "schedge/error.hpp"

namespace schedge::engine {

void validate_engine_config(const EngineConfig& cfg) {
  if (cfg.total_cycles < 1) throw config_error("total_cycles must be >= 1");
  if (cfg.cycle_duration_s <= 0) throw config_error("cycle_duration_s must be > 0");
  if (cfg.cloud_core_cap == 0) throw config_error("cloud_core_cap must be >= 1");
  dataflow::validate_window_config(cfg.window);
  churn::validate_churn_config(cfg.churn);
}

// ---------------------------------------------------------------------------
// commit
// ---------------------------------------------------------------------------

sched::CommitStatus commit_assignment(SimState& state, const Assignment& assignment) {
  auto dev_it = state.devices.find(assignment.device_id);
  if (dev_it == state.devices.end()) return sched::CommitStatus::unknown_device;
  DeviceSpec& dev = dev_it->second;
  if (assignment.core_index >= dev.cores.size()) return sched::CommitStatus::unknown_device;

  auto task_it = state.tasks.find(assignment.task_id);
  if (task_it == state.tasks.end() || !state.remaining.contains(assignment.task_id)) {
    return sched::CommitStatus::unready;
  }
  const TaskSpec& task = task_it->second;
  if (!state.is_ready(task)) return sched::CommitStatus::unready;
  if (task.safety_level > dev.safety_capability) return sched::CommitStatus::safety_violation;
  if (!dev.schedulable()) return sched::CommitStatus::battery_depleted;

  CoreState& core = dev.cores[assignment.core_index];
  if (core.queue_full()) return sched::CommitStatus::queue_full;

  core.queue.push_back(task.task_id);
  core.queued_exec_cycles += sched::exec_cycles(task.compute_load, core.speed);
  state.remaining.erase(task.task_id);
  state.running.emplace(task.task_id, Placement{assignment.device_id, assignment.core_index});
  return sched::CommitStatus::accepted;
}

// ---------------------------------------------------------------------------
// advance
// ---------------------------------------------------------------------------

AdvanceResult advance_execution(SimState& state, double cycle_duration_s,
                                const AdvanceOptions& options) {
  AdvanceResult result;
  auto emit = [&](const char* kind, const std::string& subject, std::string detail = {}) {
    if (options.sink) options.sink->emit(Event{state.cycle, kind, subject, std::move(detail)});
  };

  // Phase 1: decrement running tasks; completions free their cores.
  for (auto& [dev_id, dev] : state.devices) {
    for (auto& core : dev.cores) {
      if (!core.running) continue;
      if (--core.running->remaining_cycles == 0) {
        const std::string task_id = core.running->task_id;
        core.running.reset();
        state.running.erase(task_id);
        state.finished.insert(task_id);
        auto app_it = state.active_apps.find(state.tasks.at(task_id).app_id);
        if (app_it != state.active_apps.end()) ++app_it->second.finished;
        result.completed.push_back(task_id);
        emit(event_kind::complete, task_id);
      }
    }
  }

  // Phase 2: pop queue heads into idle cores. A task popped here gets its
  // first decrement next cycle.
  for (auto& [dev_id, dev] : state.devices) {
    if (!dev.schedulable()) continue;
    for (size_t c = 0; c < dev.cores.size(); ++c) {
      CoreState& core = dev.cores[c];
      if (core.running || core.queue.empty()) continue;
      std::string task_id = std::move(core.queue.front());
      core.queue.pop_front();
      uint64_t cycles = sched::exec_cycles(state.tasks.at(task_id).compute_load, core.speed);
      core.queued_exec_cycles -= cycles;
      emit(event_kind::start, task_id, dev_id + ":" + std::to_string(c));
      core.running = RunningTask{std::move(task_id), cycles};
    }
  }

  // Phase 3: elastic Cloud pool; materialize a core once all are busy.
  for (auto& [dev_id, dev] : state.devices) {
    if (dev.tier != Tier::Cloud) continue;
    if (dev.cores.size() >= options.cloud_core_cap) continue;
    bool all_busy = std::all_of(dev.cores.begin(), dev.cores.end(),
                                [](const CoreState& c) { return c.busy(); });
    if (all_busy && !dev.cores.empty()) {
      dev.cores.push_back(CoreState{dev.cores[0].speed, 0, {}, {}, 0});
    }
  }

  // Phase 4: energy metering and battery drain. A device whose battery hits
  // zero sheds its queued and mid-execution tasks.
  for (auto& [dev_id, dev] : state.devices) {
    uint64_t busy = 0;
    for (const auto& core : dev.cores) {
      if (core.busy()) ++busy;
    }
    uint64_t idle = dev.cores.size() - busy;
    double draw_wh = (static_cast<double>(busy) * dev.active_power_w +
                      static_cast<double>(idle) * dev.idle_power_w) *
                     cycle_duration_s / 3600.0;

    double spent = draw_wh;
    bool died = false;
    if (dev.battery_wh) {
      if (*dev.battery_wh <= 0.0) continue; // already dead, consumes nothing
      if (draw_wh >= *dev.battery_wh) {
        spent = *dev.battery_wh;
        *dev.battery_wh = 0.0;
        died = true;
      } else {
        *dev.battery_wh -= draw_wh;
      }
    }
    result.energy_wh += spent;
    result.per_device_energy_wh.emplace_back(dev_id, spent);

    if (died) {
      for (auto& core : dev.cores) {
        std::vector<std::string> shed(core.queue.begin(), core.queue.end());
        if (core.running) shed.push_back(core.running->task_id);
        core.queue.clear();
        core.queued_exec_cycles = 0;
        core.running.reset();
        for (auto& task_id : shed) {
          state.running.erase(task_id);
          if (options.battery_death == BatteryDeathPolicy::requeue) {
            state.remaining.insert(task_id);
            emit(event_kind::requeue, task_id, "battery_death");
          } else {
            state.lost.insert(task_id);
            emit(event_kind::drop, task_id, "battery_death");
          }
          result.displaced.push_back(std::move(task_id));
        }
      }
    }
  }

  return result;
}

// ---------------------------------------------------------------------------
// application finalization
// ---------------------------------------------------------------------------

std::vector<FinalizedApp> finalize_applications_detailed(SimState& state) {
  std::vector<FinalizedApp> out;
  for (auto it = state.active_apps.begin(); it != state.active_apps.end();) {
    const AppProgress& progress = it->second;
    if (progress.delivered == progress.total_tasks && progress.finished == progress.total_tasks) {
      FinalizedApp app;
      app.app_id = it->first;
      app.completion_cycle = state.cycle;
      app.first_delivery_cycle = progress.first_delivery_cycle;
      app.makespan_cycles = state.cycle - progress.first_delivery_cycle;
      app.deadline_met = app.makespan_cycles <= progress.deadline_cycles;
      state.finished_apps.push_back(FinishedApp{app.app_id, state.cycle});
      out.push_back(std::move(app));
      it = state.active_apps.erase(it);
    } else {
      ++it;
    }
  }
  return out;
}

std::vector<std::string> finalize_applications(SimState& state) {
  std::vector<std::string> ids;
  for (auto& app : finalize_applications_detailed(state)) ids.push_back(std::move(app.app_id));
  return ids;
}

// ---------------------------------------------------------------------------
// snapshot
// ---------------------------------------------------------------------------

sched::Snapshot make_snapshot(const SimState& state) {
  sched::Snapshot snap;
  snap.cycle = state.cycle;
  snap.delivered_count = state.delivered_count;

  snap.devices.reserve(state.devices.size());
  for (const auto& [id, dev] : state.devices) {
    sched::DeviceView view;
    view.device_id = id;
    view.tier = dev.tier;
    view.has_battery = dev.battery_wh.has_value();
    view.battery_wh = dev.battery_wh.value_or(0.0);
    view.schedulable = dev.schedulable();
    view.safety_capability = dev.safety_capability;
    view.active_power_w = dev.active_power_w;
    view.idle_power_w = dev.idle_power_w;
    view.cores.reserve(dev.cores.size());
    for (const auto& core : dev.cores) {
      sched::CoreView cv;
      cv.speed = core.speed;
      cv.queue_capacity = core.queue_capacity;
      cv.queue_length = static_cast<uint32_t>(core.queue.size());
      cv.busy = core.busy();
      cv.running_remaining_cycles = core.running ? core.running->remaining_cycles : 0;
      cv.queued_exec_cycles = core.queued_exec_cycles;
      view.cores.push_back(cv);
    }
    snap.devices.push_back(std::move(view));
  }

  snap.remaining.assign(state.remaining.begin(), state.remaining.end());
  snap.running.assign(state.running.begin(), state.running.end());
  snap.finished.assign(state.finished.begin(), state.finished.end());
  return snap;
}

// ---------------------------------------------------------------------------
// Environment
// ---------------------------------------------------------------------------

Environment::Environment(const datagen::GenConfig& gen_cfg, const EngineConfig& engine_cfg,
                         const SchedulerConfig& sched_cfg, EventSink* sink)
    : Environment(
          [&] {
            datagen::validate_config(gen_cfg);
            Rng datagen_rng(derive_seed(engine_cfg.seed, rng_stream::datagen));
            datagen::Workload workload;
            workload.apps = datagen::generate_applications(gen_cfg, datagen_rng);
            workload.devices = datagen::generate_devices(gen_cfg, datagen_rng);
            return workload;
          }(),
          gen_cfg, engine_cfg, sched_cfg, sink) {}

Environment::Environment(datagen::Workload workload, const datagen::GenConfig& gen_cfg,
                         const EngineConfig& engine_cfg, const SchedulerConfig& sched_cfg,
                         EventSink* sink)
    : gen_cfg_(gen_cfg),
      cfg_(engine_cfg),
      sched_cfg_(sched_cfg),
      apps_(std::move(workload.apps)),
      initial_devices_(std::move(workload.devices)),
      pool_(sched::make_agent_pool(sched_cfg.name, sched_cfg.agents, engine_cfg.seed,
                                   sched_cfg.worker_threads)),
      sink_(sink),
      window_rng_(derive_seed(engine_cfg.seed, rng_stream::window)),
      churn_rng_(derive_seed(engine_cfg.seed, rng_stream::churn)) {
  validate_engine_config(cfg_);
  cursor_ = dataflow::WorkloadCursor(apps_);
  graph_index_ = dataflow::build_graph_index(apps_, cfg_.priority_mode);
  app_meta_.reserve(apps_.size());
  for (const auto& app : apps_) {
    app_meta_.emplace(app.app_id, AppMeta{app.tasks.size(), app.deadline_cycles});
  }
  init_state();
}

void Environment::init_state() {
  for (const auto& dev : initial_devices_) {
    if (!state_.devices.emplace(dev.device_id, dev).second) {
      throw config_error("duplicate device id " + dev.device_id);
    }
    store_.register_device(dev.device_id, dev.tier, 0);
  }
  initial_fleet_size_ = state_.devices.size();

  // Continue churn device numbering past any generated/loaded ids.
  for (const auto& [id, dev] : state_.devices) {
    const char* prefix = dev.tier == Tier::IoT ? "iot" : dev.tier == Tier::MEC ? "mec" : nullptr;
    if (!prefix || id.rfind(prefix, 0) != 0) continue;
    std::string digits = id.substr(3);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) continue;
    uint64_t ordinal = std::stoull(digits) + 1;
    uint64_t& counter = dev.tier == Tier::IoT ? state_.next_iot_index : state_.next_mec_index;
    counter = std::max(counter, ordinal);
  }
}

bool Environment::done() const {
  if (state_.cycle >= cfg_.total_cycles) return true;
  if (cfg_.exact_cycles) return false;
  return cursor_.exhausted() && state_.remaining.empty() && state_.running.empty() &&
         state_.active_apps.empty() && state_.cycle > 0;
}

CycleReport Environment::step() {
  if (state_.cycle >= cfg_.total_cycles) {
    throw config_error("step: cycle " + std::to_string(state_.cycle) + " >= total_cycles");
  }
  auto t0 = std::chrono::steady_clock::now();

  CycleReport report;
  report.cycle = state_.cycle;

  // 1. window delivery
  auto batch = dataflow::next_window(cursor_, cfg_.window, state_.cycle, window_rng_);
  for (const auto& task : batch) {
    if (!state_.active_apps.contains(task.app_id)) {
      const AppMeta& meta = app_meta_.at(task.app_id);
      state_.register_app(task.app_id, meta.total_tasks, meta.deadline_cycles, state_.cycle);
    }
    state_.deliver_task(task, state_.cycle);
    if (sink_) sink_->emit(Event{state_.cycle, event_kind::deliver, task.task_id, task.app_id});
  }
  report.tasks_delivered = batch.size();

  // 2+3. preprocess and propose
  std::vector<Assignment> proposals;
  auto ready = dataflow::ready_tasks(state_);
  if (!ready.empty()) {
    ready = dataflow::prioritize_ptrs(std::move(ready), graph_index_);
    auto partition = sched::partition_by_app(ready, static_cast<uint32_t>(pool_.size()));
    sched::Snapshot snap = make_snapshot(state_);
    proposals = pool_.run(snap, partition);
  }

  // 4. commit in merge order; first proposal wins contested slots
  std::vector<std::vector<sched::TaskOutcome>> outcomes(pool_.size());
  for (const auto& assignment : proposals) {
    sched::CommitStatus status = commit_assignment(state_, assignment);
    if (status == sched::CommitStatus::accepted) {
      ++report.tasks_scheduled;
      if (sink_) {
        sink_->emit(Event{state_.cycle, event_kind::commit, assignment.task_id,
                          assignment.device_id + ":" + std::to_string(assignment.core_index)});
      }
    } else {
      ++report.tasks_rejected;
      if (sink_) {
        sink_->emit(Event{state_.cycle, event_kind::reject, assignment.task_id,
                          sched::commit_status_name(status)});
      }
    }
    if (assignment.agent_id < outcomes.size()) {
      outcomes[assignment.agent_id].push_back(sched::TaskOutcome{assignment, status});
    }
  }

  // 5. execution, completion, finalization
  AdvanceOptions adv_options;
  adv_options.battery_death = cfg_.battery_death;
  adv_options.cloud_core_cap = cfg_.cloud_core_cap;
  adv_options.sink = sink_;
  AdvanceResult advanced = advance_execution(state_, cfg_.cycle_duration_s, adv_options);
  report.tasks_completed = advanced.completed.size();
  for (const auto& [dev_id, wh] : advanced.per_device_energy_wh) {
    store_.add_device_energy(dev_id, wh);
  }

  auto finalized = finalize_applications_detailed(state_);
  report.apps_completed = finalized.size();
  for (const auto& app : finalized) {
    if (sink_) sink_->emit(Event{state_.cycle, event_kind::app_finished, app.app_id, ""});
    metrics::AppRecord record;
    record.app_id = app.app_id;
    record.arrival_cycle = app.first_delivery_cycle;
    record.completion_cycle = app.completion_cycle;
    record.makespan_cycles = app.makespan_cycles;
    record.deadline_met = app.deadline_met;
    store_.record_app(std::move(record));
  }

  // deadline bookkeeping: flag each active app once when it becomes overdue
  uint64_t deadline_misses = 0;
  for (auto& [app_id, progress] : state_.active_apps) {
    if (!progress.deadline_missed &&
        state_.cycle >= progress.first_delivery_cycle + progress.deadline_cycles) {
      progress.deadline_missed = true;
      ++deadline_misses;
    }
  }

  // feedback with the shared per-cycle reward
  sched::CycleOutcomes cycle_outcomes;
  cycle_outcomes.accepted = report.tasks_scheduled;
  cycle_outcomes.rejected = report.tasks_rejected;
  cycle_outcomes.energy_wh = advanced.energy_wh;
  cycle_outcomes.deadline_misses = deadline_misses;
  pool_.feedback(state_.cycle, outcomes, sched::reward_signal(cycle_outcomes, sched_cfg_.reward));

  // 6. churn
  auto churn_event = churn::maybe_churn(state_, cfg_.churn, churn_history_, churn_rng_, gen_cfg_);
  if (churn_event) {
    if (churn_event->direction == churn::Direction::add) {
      store_.register_device(churn_event->device_id,
                             state_.devices.at(churn_event->device_id).tier, state_.cycle);
      if (sink_) {
        sink_->emit(Event{state_.cycle, event_kind::churn_add, churn_event->device_id,
                          tier_name(churn_event->tier)});
      }
    } else {
      store_.mark_device_removed(churn_event->device_id, state_.cycle);
      if (sink_) {
        sink_->emit(Event{state_.cycle, event_kind::churn_remove, churn_event->device_id, ""});
        for (const auto& task_id : churn_event->requeued_tasks) {
          sink_->emit(Event{state_.cycle, event_kind::requeue, task_id, "device_removed"});
        }
      }
    }
    report.churn_event = *churn_event;
  }

  // 7. monitoring
  if (cfg_.monitor_interval_cycles > 0 && state_.cycle > 0 &&
      state_.cycle % cfg_.monitor_interval_cycles == 0 && sink_) {
    std::string detail = "remaining=" + std::to_string(state_.remaining.size()) +
                         ";running=" + std::to_string(state_.running.size()) +
                         ";finished=" + std::to_string(state_.finished.size()) +
                         ";devices=" + std::to_string(state_.devices.size());
    sink_->emit(Event{state_.cycle, event_kind::monitor, "-", detail});
  }

  if (!state_.conservation_holds()) {
    throw invariant_error("ledger conservation violated at cycle " + std::to_string(state_.cycle));
  }

  ++state_.cycle;
  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  metrics::record_cycle(store_, report, state_);
  return report;
}

uint64_t Environment::run() {
  uint64_t steps = 0;
  while (!done()) {
    step();
    ++steps;
  }
  return steps;
}

} // namespace schedge::engine
