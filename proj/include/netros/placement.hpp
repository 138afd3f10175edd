#pragma once

#include "netros/topology.hpp"
#include "netros/workload.hpp"

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace netros {

enum class Policy { Local, EdgeOnly, CloudOnly, NetRosHybrid, Oracle };

/// CLI spelling: local, edge, cloud, hybrid, oracle.
std::string_view to_string(Policy policy);
Policy parse_policy(std::string_view text);
inline constexpr Policy kAllPolicies[] = {Policy::Local, Policy::EdgeOnly, Policy::CloudOnly,
                                          Policy::NetRosHybrid, Policy::Oracle};

struct Placement {
  std::map<std::string, std::string> assignment;
  Policy policy = Policy::Local;

  const std::string &node_of(std::string_view task) const;
  bool operator==(const Placement &other) const { return assignment == other.assignment; }
};

struct PlacementOptions {
  /// Hybrid sends the first stage of a data-heavy pipeline to the edge and
  /// the remaining stages to the cloud.
  bool hybrid_split = true;
};

struct PlacementCost {
  double latency_cost_ms = std::numeric_limits<double>::infinity();
  double robot_cpu_fraction = std::numeric_limits<double>::infinity();
  bool feasible = false;
};

/// Mean timing of one pipeline request under a placement, ignoring queueing.
struct TransactionEstimate {
  double upload_ms = 0.0;
  double compute_ms = 0.0;
  double inter_stage_ms = 0.0;
  double return_ms = 0.0;
  double display_ms = 0.0;

  /// From arrival at the first stage until the last stage finishes.
  double recognition_ms() const { return compute_ms + inter_stage_ms; }
  /// From the trigger on the robot until the result is shown.
  double response_ms() const { return upload_ms + recognition_ms() + return_ms + display_ms; }
};

Placement place(Policy policy, const Workload &w, const Topology &t,
                std::string_view slice_id, PlacementOptions options = {});

/// Placement invariants: total, anchors on the robot, memory respected.
std::vector<Violation> check_placement(const Placement &p, const Workload &w,
                                       const Topology &t);

PlacementCost placement_cost(const Placement &p, const Workload &w, const Topology &t,
                             std::string_view slice_id);

TransactionEstimate estimate_transaction(const RequestPipeline &pipeline, const Workload &w,
                                         const Placement &p, const Topology &t,
                                         std::string_view slice_id);

/// Exhaustive search over every node assignment of the non-Anchor tasks.
/// Ordering: latency cost, then robot CPU, then the assignment itself.
Placement brute_force_optimal(const Workload &w, const Topology &t,
                              std::string_view slice_id);

inline constexpr std::size_t kMaxEnumeratedTasks = 12;

} // namespace netros
