#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "schedge/error.hpp"

namespace schedge {

// One line of the append-only event log: cycle,event_kind,subject_id,detail
struct Event {
  uint64_t cycle = 0;
  std::string kind;
  std::string subject;
  std::string detail;
};

namespace event_kind {
inline constexpr const char* deliver = "deliver";       // subject=task, detail=app
inline constexpr const char* commit = "commit";         // subject=task, detail=device:core
inline constexpr const char* reject = "reject";         // subject=task, detail=reason
inline constexpr const char* start = "start";           // subject=task, detail=device:core
inline constexpr const char* complete = "complete";     // subject=task
inline constexpr const char* requeue = "requeue";       // subject=task, detail=reason
inline constexpr const char* drop = "drop";             // subject=task, detail=reason
inline constexpr const char* app_finished = "app_finished"; // subject=app
inline constexpr const char* churn_add = "churn_add";   // subject=device, detail=tier
inline constexpr const char* churn_remove = "churn_remove"; // subject=device
inline constexpr const char* monitor = "monitor";       // subject=-, detail=summary
} // namespace event_kind

class EventSink {
public:
  virtual ~EventSink() = default;
  virtual void emit(const Event& event) = 0;
};

// In-memory sink for tests and invariant replay.
class MemoryEventSink final : public EventSink {
public:
  void emit(const Event& event) override { events_.push_back(event); }
  const std::vector<Event>& events() const { return events_; }
  void clear() { events_.clear(); }

private:
  std::vector<Event> events_;
};

class FileEventSink final : public EventSink {
public:
  explicit FileEventSink(const std::string& path) : out_(path) {
    if (!out_) throw io_error("cannot write event log " + path);
  }
  void emit(const Event& event) override {
    out_ << event.cycle << ',' << event.kind << ',' << event.subject << ',' << event.detail
         << '\n';
  }

private:
  std::ofstream out_;
};

} // namespace schedge
