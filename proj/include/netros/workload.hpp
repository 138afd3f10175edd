#pragma once

#include "netros/error.hpp"

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace netros {

enum class TaskClass { LatencyCritical, DataHeavy, Anchor };

std::string_view to_string(TaskClass cls);
TaskClass parse_task_class(std::string_view text);

struct Topic {
  std::string name;
  std::uint64_t message_size_bytes = 1;
  double publish_rate_hz = 1.0;
};

struct ServiceTask {
  std::string id;
  TaskClass task_class = TaskClass::LatencyCritical;
  /// Compute-unit-seconds consumed per request (a robot core runs 1 unit/s).
  double work_per_request = 0.0;
  double memory_gb = 0.0;
  std::set<std::string> publishes;
  std::set<std::string> subscribes;
  bool pinned_to_robot = false;
};

struct PipelineStage {
  std::string task;
  double fraction = 1.0;
};

/// A request that flows robot -> stage 1 -> ... -> stage n -> robot display.
struct RequestPipeline {
  std::string id;
  std::vector<PipelineStage> stages;
  std::string trigger_topic;
  std::string response_topic;
  /// Image uploaded from the robot to the first stage.
  std::uint64_t payload_bytes = 1;
  /// Data handed from one stage to the next.
  std::uint64_t stage_payload_bytes = 1;
  /// Result returned from the last stage to the robot.
  std::uint64_t result_bytes = 1;
  /// Robot-side rendering delay after the result lands.
  double display_overhead_ms = 0.0;

  double total_fraction() const;
};

struct Workload {
  std::vector<Topic> topics;
  std::vector<ServiceTask> tasks;
  std::vector<RequestPipeline> pipelines;

  const Topic *find_topic(std::string_view name) const;
  const ServiceTask *find_task(std::string_view id) const;
  const ServiceTask &task(std::string_view id) const;
  const RequestPipeline *find_pipeline(std::string_view id) const;

  /// True when the task is a stage of some pipeline; such tasks only do work
  /// when a pipeline request reaches them.
  bool is_pipeline_stage(std::string_view task_id) const;
  /// Tasks publishing the topic, in task order.
  std::vector<const ServiceTask *> publishers_of(std::string_view topic) const;
  std::vector<const ServiceTask *> subscribers_of(std::string_view topic) const;
};

/// Returns every broken invariant; empty means the workload is valid.
std::vector<Violation> validate_workload(const Workload &w);

/// Throws the first violation as an Error.
void require_valid(const Workload &w);

/// Returns the declared class after checking pinned_to_robot <=> Anchor.
TaskClass classify_task(const ServiceTask &task);

} // namespace netros
