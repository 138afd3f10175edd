#include "netros/sim/event_queue.hpp"

#include <stdexcept>
#include <string>

namespace netros::sim {

std::string_view to_string(EventKind kind) {
  switch (kind) {
  case EventKind::MessagePublished: return "MessagePublished";
  case EventKind::MessageArrived: return "MessageArrived";
  case EventKind::ServiceStarted: return "ServiceStarted";
  case EventKind::ServiceCompleted: return "ServiceCompleted";
  case EventKind::ProbeSent: return "ProbeSent";
  case EventKind::ProbeEchoed: return "ProbeEchoed";
  case EventKind::SampleTick: return "SampleTick";
  }
  return "?";
}

std::uint64_t EventQueue::schedule(double at_ms, EventKind kind, std::function<void()> action) {
  if (at_ms < now_) {
    throw std::logic_error("event scheduled in the past: " + std::to_string(at_ms) + " < " +
                           std::to_string(now_));
  }
  std::uint64_t seq = next_sequence_++;
  heap_.push(Event{at_ms, seq, kind, std::move(action)});
  return seq;
}

Event EventQueue::pop() {
  Event e = heap_.top();
  heap_.pop();
  now_ = e.timestamp_ms;
  return e;
}

} // namespace netros::sim
