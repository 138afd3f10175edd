#include "netros/sim/station.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <vector>

namespace netros::sim {

namespace {
constexpr double kDoneEpsilon = 1e-12;
}

ComputeStation::ComputeStation(int cores, double capacity_per_core, Discipline discipline,
                               EventQueue &queue)
    : cores_(cores), capacity_per_core_(capacity_per_core), discipline_(discipline),
      queue_(queue), last_update_ms_(queue.now()) {
  if (cores <= 0 || !(capacity_per_core > 0.0)) {
    throw std::invalid_argument("station needs positive cores and capacity");
  }
}

std::size_t ComputeStation::in_service() const {
  if (discipline_ == Discipline::ProcessorSharing) return jobs_.size();
  return std::min(jobs_.size(), static_cast<std::size_t>(cores_));
}

double ComputeStation::rate_per_ms() const {
  double per_core = capacity_per_core_ / 1000.0;
  if (discipline_ == Discipline::Fifo || jobs_.empty()) return per_core;
  double share = std::min(1.0, static_cast<double>(cores_) / static_cast<double>(jobs_.size()));
  return per_core * share;
}

double ComputeStation::busy_core_ms(double now_ms) const {
  double busy = std::min<double>(static_cast<double>(jobs_.size()), cores_);
  return busy_integral_ + busy * (now_ms - last_update_ms_);
}

void ComputeStation::advance(double now_ms) {
  double dt = now_ms - last_update_ms_;
  if (dt > 0.0) {
    double done = rate_per_ms() * dt;
    std::size_t n = in_service();
    for (std::size_t i = 0; i < n; ++i) jobs_[i].remaining -= done;
    busy_integral_ += std::min<double>(static_cast<double>(jobs_.size()), cores_) * dt;
  }
  last_update_ms_ = now_ms;
}

void ComputeStation::submit(double work_units, Completion on_done) {
  advance(queue_.now());
  jobs_.push_back(Job{next_job_++, std::max(0.0, work_units), std::move(on_done)});
  reschedule();
}

void ComputeStation::reschedule() {
  ++version_;
  std::size_t n = in_service();
  if (n == 0) return;
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (jobs_[i].remaining < jobs_[best].remaining) best = i;
  }
  double at = queue_.now() + std::max(0.0, jobs_[best].remaining) / rate_per_ms();
  std::uint64_t version = version_;
  std::uint64_t job_id = jobs_[best].id;
  queue_.schedule(at, EventKind::ServiceCompleted,
                  [this, version, job_id] { on_completion(version, job_id); });
}

void ComputeStation::on_completion(std::uint64_t version, std::uint64_t job_id) {
  if (version != version_) return;
  advance(queue_.now());
  std::vector<Completion> finished;
  std::size_t n = in_service();
  std::deque<Job> kept;
  for (std::size_t i = 0; i < jobs_.size(); ++i) {
    auto &job = jobs_[i];
    if (i < n && (job.id == job_id || job.remaining <= kDoneEpsilon)) {
      finished.push_back(std::move(job.on_done));
    } else {
      kept.push_back(std::move(job));
    }
  }
  jobs_ = std::move(kept);
  reschedule();
  for (auto &done : finished) done();
}

} // namespace netros::sim
