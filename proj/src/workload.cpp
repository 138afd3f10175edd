#include "netros/workload.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

namespace netros {

namespace {

constexpr double kFractionTolerance = 1e-9;

bool has_cycle(const std::map<std::string, std::set<std::string>> &edges) {
  enum class Mark { Fresh, Open, Done };
  std::map<std::string, Mark> marks;
  std::function<bool(const std::string &)> visit = [&](const std::string &v) {
    auto &m = marks[v];
    if (m == Mark::Open) return true;
    if (m == Mark::Done) return false;
    m = Mark::Open;
    if (auto it = edges.find(v); it != edges.end()) {
      for (const auto &next : it->second) {
        if (visit(next)) return true;
      }
    }
    marks[v] = Mark::Done;
    return false;
  };
  for (const auto &[v, _] : edges) {
    if (visit(v)) return true;
  }
  return false;
}

} // namespace

std::string_view to_string(TaskClass cls) {
  switch (cls) {
  case TaskClass::LatencyCritical: return "LatencyCritical";
  case TaskClass::DataHeavy: return "DataHeavy";
  case TaskClass::Anchor: return "Anchor";
  }
  return "?";
}

TaskClass parse_task_class(std::string_view text) {
  if (text == "LatencyCritical") return TaskClass::LatencyCritical;
  if (text == "DataHeavy") return TaskClass::DataHeavy;
  if (text == "Anchor") return TaskClass::Anchor;
  throw Error(ErrorCode::Parse, "unknown task class '" + std::string(text) + "'");
}

double RequestPipeline::total_fraction() const {
  double sum = 0.0;
  for (const auto &s : stages) sum += s.fraction;
  return sum;
}

const Topic *Workload::find_topic(std::string_view name) const {
  auto it = std::find_if(topics.begin(), topics.end(),
                         [&](const Topic &t) { return t.name == name; });
  return it == topics.end() ? nullptr : &*it;
}

const ServiceTask *Workload::find_task(std::string_view id) const {
  auto it = std::find_if(tasks.begin(), tasks.end(),
                         [&](const ServiceTask &t) { return t.id == id; });
  return it == tasks.end() ? nullptr : &*it;
}

const ServiceTask &Workload::task(std::string_view id) const {
  if (const auto *t = find_task(id)) return *t;
  throw Error(ErrorCode::DanglingReference, "unknown task '" + std::string(id) + "'");
}

const RequestPipeline *Workload::find_pipeline(std::string_view id) const {
  auto it = std::find_if(pipelines.begin(), pipelines.end(),
                         [&](const RequestPipeline &p) { return p.id == id; });
  return it == pipelines.end() ? nullptr : &*it;
}

bool Workload::is_pipeline_stage(std::string_view task_id) const {
  for (const auto &p : pipelines) {
    for (const auto &s : p.stages) {
      if (s.task == task_id) return true;
    }
  }
  return false;
}

std::vector<const ServiceTask *> Workload::publishers_of(std::string_view topic) const {
  std::vector<const ServiceTask *> out;
  for (const auto &t : tasks) {
    if (t.publishes.count(std::string(topic))) out.push_back(&t);
  }
  return out;
}

std::vector<const ServiceTask *> Workload::subscribers_of(std::string_view topic) const {
  std::vector<const ServiceTask *> out;
  for (const auto &t : tasks) {
    if (t.subscribes.count(std::string(topic))) out.push_back(&t);
  }
  return out;
}

TaskClass classify_task(const ServiceTask &task) {
  bool anchor = task.task_class == TaskClass::Anchor;
  if (anchor != task.pinned_to_robot) {
    throw Error(ErrorCode::InconsistentClass,
                "task '" + task.id + "' is " + std::string(to_string(task.task_class)) +
                    (task.pinned_to_robot ? " but pinned to the robot"
                                          : " but not pinned to the robot"));
  }
  return task.task_class;
}

std::vector<Violation> validate_workload(const Workload &w) {
  std::vector<Violation> out;
  auto add = [&](ErrorCode code, const std::string &subject, std::string message) {
    out.push_back({code, subject, std::move(message)});
  };

  std::set<std::string> names;
  for (const auto &t : w.topics) {
    if (!names.insert(t.name).second) {
      add(ErrorCode::DuplicateId, t.name, "topic '" + t.name + "' declared twice");
    }
    if (t.message_size_bytes == 0 || !(t.publish_rate_hz > 0.0)) {
      add(ErrorCode::InvalidValue, t.name,
          "topic '" + t.name + "' needs positive size and rate");
    }
  }

  std::set<std::string> ids;
  for (const auto &t : w.tasks) {
    if (!ids.insert(t.id).second) {
      add(ErrorCode::DuplicateId, t.id, "task '" + t.id + "' declared twice");
    }
    try {
      classify_task(t);
    } catch (const Error &e) {
      add(e.code(), t.id, e.what());
    }
    if (t.work_per_request < 0.0 || t.memory_gb < 0.0) {
      add(ErrorCode::InvalidValue, t.id, "task '" + t.id + "' has negative work or memory");
    }
    for (const auto &topic : t.publishes) {
      if (t.subscribes.count(topic)) {
        add(ErrorCode::InvalidValue, t.id,
            "task '" + t.id + "' both publishes and subscribes '" + topic + "'");
      }
    }
    for (const auto &topic : t.publishes) {
      if (!w.find_topic(topic)) {
        add(ErrorCode::DanglingReference, t.id,
            "task '" + t.id + "' publishes undeclared topic '" + topic + "'");
      }
    }
    for (const auto &topic : t.subscribes) {
      if (!w.find_topic(topic)) {
        add(ErrorCode::DanglingReference, t.id,
            "task '" + t.id + "' subscribes undeclared topic '" + topic + "'");
      } else if (w.publishers_of(topic).empty()) {
        add(ErrorCode::OrphanSubscription, t.id,
            "task '" + t.id + "' subscribes '" + topic + "' which nobody publishes");
      }
    }
  }

  std::map<std::string, std::set<std::string>> stage_edges;
  for (const auto &p : w.pipelines) {
    if (p.stages.empty()) {
      add(ErrorCode::InvalidValue, p.id, "pipeline '" + p.id + "' has no stages");
    }
    for (const auto &s : p.stages) {
      if (!w.find_task(s.task)) {
        add(ErrorCode::UnknownTaskInPipeline, p.id,
            "pipeline '" + p.id + "' references unknown task '" + s.task + "'");
      }
      if (!(s.fraction > 0.0) || s.fraction > 1.0) {
        add(ErrorCode::InvalidValue, p.id,
            "pipeline '" + p.id + "' stage '" + s.task + "' fraction outside (0, 1]");
      }
    }
    if (!p.stages.empty() && std::abs(p.total_fraction() - 1.0) > kFractionTolerance) {
      add(ErrorCode::InvalidValue, p.id,
          "pipeline '" + p.id + "' stage fractions sum to " +
              std::to_string(p.total_fraction()) + ", expected 1");
    }
    for (std::size_t i = 0; i + 1 < p.stages.size(); ++i) {
      stage_edges[p.stages[i].task].insert(p.stages[i + 1].task);
    }
    for (const auto *topic : {&p.trigger_topic, &p.response_topic}) {
      if (!w.find_topic(*topic)) {
        add(ErrorCode::DanglingReference, p.id,
            "pipeline '" + p.id + "' names undeclared topic '" + *topic + "'");
      }
    }
    if (p.payload_bytes == 0 || p.stage_payload_bytes == 0 || p.result_bytes == 0 ||
        p.display_overhead_ms < 0.0) {
      add(ErrorCode::InvalidValue, p.id, "pipeline '" + p.id + "' has non-positive sizes");
    }
  }
  if (has_cycle(stage_edges)) {
    add(ErrorCode::CyclicPipeline, "pipelines", "pipeline stage graph contains a cycle");
  }
  return out;
}

void require_valid(const Workload &w) {
  auto violations = validate_workload(w);
  if (!violations.empty()) {
    throw Error(violations.front().code, violations.front().message);
  }
}

} // namespace netros
