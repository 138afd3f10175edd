#include "netros/placement.hpp"

#include <algorithm>
#include <cmath>

namespace netros {

namespace {

constexpr double kTieEpsilonMs = 1e-9;

/// Transfer coefficients for every node pair, precomputed so the oracle can
/// evaluate thousands of assignments cheaply.
class TransferTable {
public:
  TransferTable(const Topology &t, std::string_view slice_id) {
    for (const auto &a : t.nodes) {
      for (const auto &b : t.nodes) {
        Entry e;
        if (a.id == b.id) {
          e.latency_ms = t.loopback_one_way_ms;
        } else {
          for (const auto &lid : path_between(t, a.id, b.id)) {
            e.latency_ms += t.link(lid).one_way_latency_ms;
            e.ms_per_byte += serialization_ms(1, effective_bandwidth(t, lid, slice_id));
          }
        }
        table_[{a.id, b.id}] = e;
      }
    }
  }

  double operator()(const std::string &from, const std::string &to,
                    std::uint64_t bytes) const {
    const auto &e = table_.at({from, to});
    return e.latency_ms + e.ms_per_byte * static_cast<double>(bytes);
  }

private:
  struct Entry {
    double latency_ms = 0.0;
    double ms_per_byte = 0.0;
  };
  std::map<std::pair<std::string, std::string>, Entry> table_;
};

double stage_compute_ms(const ServiceTask &task, double fraction, const ComputeNode &node) {
  return task.work_per_request * fraction / node.capacity_per_core * 1000.0;
}

TransactionEstimate estimate(const RequestPipeline &pipeline, const Workload &w,
                             const Placement &p, const Topology &t,
                             const TransferTable &transfer) {
  TransactionEstimate est;
  const std::string &robot = t.robot().id;
  std::string previous;
  for (std::size_t i = 0; i < pipeline.stages.size(); ++i) {
    const auto &stage = pipeline.stages[i];
    const std::string &host = p.node_of(stage.task);
    if (i == 0) {
      est.upload_ms = transfer(robot, host, pipeline.payload_bytes);
    } else {
      est.inter_stage_ms += transfer(previous, host, pipeline.stage_payload_bytes);
    }
    est.compute_ms += stage_compute_ms(w.task(stage.task), stage.fraction, t.node(host));
    previous = host;
  }
  if (!pipeline.stages.empty()) {
    est.return_ms = transfer(previous, robot, pipeline.result_bytes);
  }
  est.display_ms = pipeline.display_overhead_ms;
  return est;
}

/// Events per second that make a non-stage task do work: arrivals on its
/// subscriptions, or its own publications when it subscribes to nothing.
double event_rate_hz(const ServiceTask &task, const Workload &w) {
  double rate = 0.0;
  if (!task.subscribes.empty()) {
    for (const auto &name : task.subscribes) {
      rate += w.find_topic(name)->publish_rate_hz *
              static_cast<double>(w.publishers_of(name).size());
    }
  } else {
    for (const auto &name : task.publishes) rate += w.find_topic(name)->publish_rate_hz;
  }
  return rate;
}

double stream_latency_ms(const ServiceTask &task, const Workload &w, const Placement &p,
                         const Topology &t, const TransferTable &transfer) {
  const std::string &host = p.node_of(task.id);
  double weighted = 0.0;
  double weight = 0.0;
  for (const auto &name : task.subscribes) {
    const auto *topic = w.find_topic(name);
    auto pubs = w.publishers_of(name);
    if (pubs.empty()) continue;
    double mean = 0.0;
    for (const auto *pub : pubs) {
      mean += transfer(p.node_of(pub->id), host, topic->message_size_bytes);
    }
    mean /= static_cast<double>(pubs.size());
    weighted += topic->publish_rate_hz * mean;
    weight += topic->publish_rate_hz;
  }
  double input = weight > 0.0 ? weighted / weight : 0.0;
  double output = 0.0;
  for (const auto &name : task.publishes) {
    const auto *topic = w.find_topic(name);
    for (const auto *sub : w.subscribers_of(name)) {
      output = std::max(output, transfer(host, p.node_of(sub->id), topic->message_size_bytes));
    }
  }
  double compute = task.work_per_request / t.node(host).capacity_per_core * 1000.0;
  return input + compute + output;
}

PlacementCost cost_with(const Placement &p, const Workload &w, const Topology &t,
                        const TransferTable &transfer) {
  PlacementCost cost;
  cost.latency_cost_ms = 0.0;
  const auto &robot = t.robot();

  std::map<std::string, double> robot_stage_busy;
  for (const auto &pipe : w.pipelines) {
    auto est = estimate(pipe, w, p, t, transfer);
    cost.latency_cost_ms += est.response_ms();
    double cycle_ms = est.response_ms();
    for (const auto &stage : pipe.stages) {
      if (p.node_of(stage.task) != robot.id || cycle_ms <= 0.0) continue;
      // Closed loop: one outstanding request per pipeline.
      robot_stage_busy[stage.task] +=
          stage_compute_ms(w.task(stage.task), stage.fraction, robot) / cycle_ms;
    }
  }

  double busy_cores = 0.0;
  for (const auto &[_, busy] : robot_stage_busy) busy_cores += busy;
  for (const auto &task : w.tasks) {
    if (w.is_pipeline_stage(task.id)) continue;
    if (task.task_class != TaskClass::Anchor) {
      cost.latency_cost_ms += stream_latency_ms(task, w, p, t, transfer);
    }
    if (p.node_of(task.id) == robot.id) {
      busy_cores += event_rate_hz(task, w) * task.work_per_request / robot.capacity_per_core;
    }
  }
  cost.robot_cpu_fraction =
      std::min(1.0, robot.baseline_load_fraction + busy_cores / robot.cores);
  cost.feasible = true;
  return cost;
}

bool better(const PlacementCost &a, const Placement &pa, const PlacementCost &b,
            const Placement &pb) {
  if (std::abs(a.latency_cost_ms - b.latency_cost_ms) > kTieEpsilonMs) {
    return a.latency_cost_ms < b.latency_cost_ms;
  }
  if (std::abs(a.robot_cpu_fraction - b.robot_cpu_fraction) > kTieEpsilonMs) {
    return a.robot_cpu_fraction < b.robot_cpu_fraction;
  }
  return pa.assignment < pb.assignment;
}

const ComputeNode &node_for_role(const Topology &t, NodeRole role) {
  if (const auto *n = t.first_with_role(role)) return *n;
  throw Error(ErrorCode::Infeasible,
              "topology has no " + std::string(to_string(role)) + " node");
}

void require_feasible(const Placement &p, const Workload &w, const Topology &t) {
  auto violations = check_placement(p, w, t);
  if (!violations.empty()) {
    throw Error(ErrorCode::Infeasible, violations.front().message);
  }
}

} // namespace

std::string_view to_string(Policy policy) {
  switch (policy) {
  case Policy::Local: return "local";
  case Policy::EdgeOnly: return "edge";
  case Policy::CloudOnly: return "cloud";
  case Policy::NetRosHybrid: return "hybrid";
  case Policy::Oracle: return "oracle";
  }
  return "?";
}

Policy parse_policy(std::string_view text) {
  for (auto p : kAllPolicies) {
    if (to_string(p) == text) return p;
  }
  throw Error(ErrorCode::Parse, "unknown policy '" + std::string(text) +
                                    "' (expected local, edge, cloud, hybrid or oracle)");
}

const std::string &Placement::node_of(std::string_view task) const {
  auto it = assignment.find(std::string(task));
  if (it == assignment.end()) {
    throw Error(ErrorCode::DanglingReference, "task '" + std::string(task) + "' is unplaced");
  }
  return it->second;
}

std::vector<Violation> check_placement(const Placement &p, const Workload &w,
                                       const Topology &t) {
  std::vector<Violation> out;
  const std::string &robot = t.robot().id;
  std::map<std::string, double> memory;
  for (const auto &task : w.tasks) {
    auto it = p.assignment.find(task.id);
    if (it == p.assignment.end()) {
      out.push_back({ErrorCode::Infeasible, task.id, "task '" + task.id + "' is unplaced"});
      continue;
    }
    if (!t.has_node(it->second)) {
      out.push_back({ErrorCode::UnknownNode, task.id,
                     "task '" + task.id + "' placed on unknown node '" + it->second + "'"});
      continue;
    }
    if (task.task_class == TaskClass::Anchor && it->second != robot) {
      out.push_back({ErrorCode::Infeasible, task.id,
                     "anchor task '" + task.id + "' must stay on the robot"});
    }
    memory[it->second] += task.memory_gb;
  }
  if (p.assignment.size() != w.tasks.size()) {
    for (const auto &[task, _] : p.assignment) {
      if (!w.find_task(task)) {
        out.push_back({ErrorCode::Infeasible, task, "placement names unknown task '" + task + "'"});
      }
    }
  }
  for (const auto &[node, used] : memory) {
    double available = t.node(node).memory_gb;
    if (used > available + 1e-12) {
      out.push_back({ErrorCode::Infeasible, node,
                     "node '" + node + "' needs " + std::to_string(used) + " GB but has " +
                         std::to_string(available) + " GB"});
    }
  }
  return out;
}

Placement place(Policy policy, const Workload &w, const Topology &t,
                std::string_view slice_id, PlacementOptions options) {
  if (policy == Policy::Oracle) return brute_force_optimal(w, t, slice_id);

  Placement p;
  p.policy = policy;
  const std::string &robot = t.robot().id;
  for (const auto &task : w.tasks) {
    TaskClass cls = classify_task(task);
    if (cls == TaskClass::Anchor || policy == Policy::Local) {
      p.assignment[task.id] = robot;
      continue;
    }
    switch (policy) {
    case Policy::EdgeOnly: p.assignment[task.id] = node_for_role(t, NodeRole::Edge).id; break;
    case Policy::CloudOnly: p.assignment[task.id] = node_for_role(t, NodeRole::Cloud).id; break;
    default:
      p.assignment[task.id] = cls == TaskClass::LatencyCritical
                                  ? node_for_role(t, NodeRole::Edge).id
                                  : node_for_role(t, NodeRole::Cloud).id;
    }
  }

  if (policy == Policy::NetRosHybrid && options.hybrid_split) {
    for (const auto &pipe : w.pipelines) {
      bool data_heavy = std::any_of(pipe.stages.begin(), pipe.stages.end(), [&](const auto &s) {
        return w.task(s.task).task_class == TaskClass::DataHeavy;
      });
      if (!data_heavy || pipe.stages.size() < 2) continue;
      for (std::size_t i = 0; i < pipe.stages.size(); ++i) {
        const auto &task = w.task(pipe.stages[i].task);
        if (task.task_class == TaskClass::Anchor) continue;
        p.assignment[task.id] = i == 0 ? node_for_role(t, NodeRole::Edge).id
                                       : node_for_role(t, NodeRole::Cloud).id;
      }
    }
  }

  require_feasible(p, w, t);
  return p;
}

PlacementCost placement_cost(const Placement &p, const Workload &w, const Topology &t,
                             std::string_view slice_id) {
  if (!check_placement(p, w, t).empty()) return {};
  return cost_with(p, w, t, TransferTable(t, slice_id));
}

TransactionEstimate estimate_transaction(const RequestPipeline &pipeline, const Workload &w,
                                         const Placement &p, const Topology &t,
                                         std::string_view slice_id) {
  return estimate(pipeline, w, p, t, TransferTable(t, slice_id));
}

Placement brute_force_optimal(const Workload &w, const Topology &t,
                              std::string_view slice_id) {
  std::vector<std::string> movable;
  Placement candidate;
  candidate.policy = Policy::Oracle;
  const std::string &robot = t.robot().id;
  for (const auto &task : w.tasks) {
    if (classify_task(task) == TaskClass::Anchor) {
      candidate.assignment[task.id] = robot;
    } else {
      movable.push_back(task.id);
    }
  }
  if (movable.size() > kMaxEnumeratedTasks) {
    throw Error(ErrorCode::TooLarge, std::to_string(movable.size()) +
                                         " movable tasks exceed the enumeration limit of " +
                                         std::to_string(kMaxEnumeratedTasks));
  }

  std::vector<std::string> nodes;
  for (const auto &n : t.nodes) nodes.push_back(n.id);
  std::sort(nodes.begin(), nodes.end());

  TransferTable transfer(t, slice_id);
  std::optional<Placement> best;
  PlacementCost best_cost;
  std::vector<std::size_t> digits(movable.size(), 0);
  while (true) {
    for (std::size_t i = 0; i < movable.size(); ++i) {
      candidate.assignment[movable[i]] = nodes[digits[i]];
    }
    if (check_placement(candidate, w, t).empty()) {
      PlacementCost cost = cost_with(candidate, w, t, transfer);
      if (!best || better(cost, candidate, best_cost, *best)) {
        best = candidate;
        best_cost = cost;
      }
    }
    std::size_t i = 0;
    while (i < digits.size() && ++digits[i] == nodes.size()) digits[i++] = 0;
    if (i == digits.size()) break;
  }
  if (!best) throw Error(ErrorCode::NoFeasible, "no assignment satisfies the memory limits");
  return *best;
}

} // namespace netros
