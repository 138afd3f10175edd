#pragma once

#include "netros/sim/event_queue.hpp"

#include <cstdint>
#include <deque>
#include <functional>
#include <string>

namespace netros::sim {

enum class Discipline {
  /// Every active job runs; each gets min(1, cores / active) of a core.
  ProcessorSharing,
  /// Jobs start in arrival order, at most one per core.
  Fifo,
};

/// Multi-core compute queue of one node. Work is in compute units; a core
/// retires `capacity_per_core` units per second.
class ComputeStation {
public:
  using Completion = std::function<void()>;

  ComputeStation(int cores, double capacity_per_core, Discipline discipline,
                 EventQueue &queue);

  ComputeStation(const ComputeStation &) = delete;
  ComputeStation &operator=(const ComputeStation &) = delete;

  /// Enqueues a job at the queue's current time.
  void submit(double work_units, Completion on_done);

  std::size_t active() const { return jobs_.size(); }
  int cores() const { return cores_; }

  /// Integral of busy cores over time, in core-milliseconds, up to `now_ms`.
  double busy_core_ms(double now_ms) const;

private:
  struct Job {
    std::uint64_t id;
    double remaining;
    Completion on_done;
  };

  std::size_t in_service() const;
  double rate_per_ms() const;
  void advance(double now_ms);
  void reschedule();
  void on_completion(std::uint64_t version, std::uint64_t job_id);

  int cores_;
  double capacity_per_core_;
  Discipline discipline_;
  EventQueue &queue_;
  std::deque<Job> jobs_;
  std::uint64_t next_job_ = 0;
  std::uint64_t version_ = 0;
  double last_update_ms_ = 0.0;
  double busy_integral_ = 0.0;
};

} // namespace netros::sim
