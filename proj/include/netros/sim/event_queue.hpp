#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <string_view>
#include <vector>

namespace netros::sim {

enum class EventKind {
  MessagePublished,
  MessageArrived,
  ServiceStarted,
  ServiceCompleted,
  ProbeSent,
  ProbeEchoed,
  SampleTick,
};

std::string_view to_string(EventKind kind);

struct Event {
  double timestamp_ms = 0.0;
  /// Assigned at scheduling time; breaks timestamp ties in FIFO order.
  std::uint64_t sequence = 0;
  EventKind kind = EventKind::SampleTick;
  std::function<void()> action;
};

/// Min-heap of events ordered by (timestamp, sequence).
class EventQueue {
public:
  std::uint64_t schedule(double at_ms, EventKind kind, std::function<void()> action);

  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  double next_time() const { return heap_.top().timestamp_ms; }
  double now() const { return now_; }

  /// Removes the earliest event and advances the clock to it.
  Event pop();

private:
  struct Later {
    bool operator()(const Event &a, const Event &b) const {
      if (a.timestamp_ms != b.timestamp_ms) return a.timestamp_ms > b.timestamp_ms;
      return a.sequence > b.sequence;
    }
  };

  std::priority_queue<Event, std::vector<Event>, Later> heap_;
  std::uint64_t next_sequence_ = 0;
  double now_ = 0.0;
};

} // namespace netros::sim
