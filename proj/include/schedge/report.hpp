#pragma once

#include <cstdint>
#include <optional>

#include "schedge/churn.hpp"

namespace schedge {

// Per-cycle summary emitted by Environment::step.
struct CycleReport {
  uint64_t cycle = 0;
  uint64_t tasks_delivered = 0;
  uint64_t tasks_scheduled = 0; // accepted commits
  uint64_t tasks_rejected = 0;  // tasks_scheduled + tasks_rejected = attempted
  uint64_t tasks_completed = 0;
  uint64_t apps_completed = 0;
  std::optional<churn::ChurnEvent> churn_event;
  double wall_time_s = 0.0; // measured, never part of determinism guarantees
};

} // namespace schedge
