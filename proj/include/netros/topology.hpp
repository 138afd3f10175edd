#pragma once

#include "netros/error.hpp"

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace netros {

enum class NodeRole { Robot, Edge, Cloud };

std::string_view to_string(NodeRole role);
NodeRole parse_node_role(std::string_view text);

struct ComputeNode {
  std::string id;
  NodeRole role = NodeRole::Robot;
  int cores = 1;
  /// Compute units per second delivered by one core; the robot core is 1.0.
  double capacity_per_core = 1.0;
  double memory_gb = 0.0;
  /// CPU share consumed by always-on drivers, in [0, 1].
  double baseline_load_fraction = 0.0;
};

struct NetworkLink {
  std::string id;
  std::string endpoint_a;
  std::string endpoint_b;
  double one_way_latency_ms = 0.0;
  double bandwidth_mbps = 1.0;
  /// Coefficient of variation of the per-traversal latency.
  double jitter_cv = 0.0;

  bool touches(std::string_view node) const {
    return endpoint_a == node || endpoint_b == node;
  }
  const std::string &other(std::string_view node) const {
    return endpoint_a == node ? endpoint_b : endpoint_a;
  }
};

struct NetworkSlice {
  std::string id;
  std::set<std::string> member_nodes;
  std::set<std::string> member_links;
  double bandwidth_share = 1.0;
  bool isolated = true;
};

/// Robot/edge/cloud infrastructure graph plus the slice overlay. Treated as an
/// immutable value once built; lookups throw on unknown ids.
struct Topology {
  std::vector<ComputeNode> nodes;
  std::vector<NetworkLink> links;
  std::vector<NetworkSlice> slices;
  std::map<std::string, double> background_traffic_mbps;
  /// One-way latency of a message that stays on its node (loopback).
  double loopback_one_way_ms = 0.008;

  const ComputeNode &node(std::string_view id) const;
  const NetworkLink &link(std::string_view id) const;
  const NetworkSlice &slice(std::string_view id) const;
  bool has_node(std::string_view id) const;

  const ComputeNode &robot() const;
  /// First node (by id order) with the given role, or nullptr.
  const ComputeNode *first_with_role(NodeRole role) const;
  /// Link joining the two nodes directly, or nullptr.
  const NetworkLink *link_between(std::string_view a, std::string_view b) const;
  double background_mbps(std::string_view link_id) const;
};

/// Throws the first structural error found (DuplicateId, DanglingReference,
/// DisconnectedGraph, InvalidValue).
void validate_topology(const Topology &t);

/// Shortest hop-count path as link ids. Ties are resolved on the
/// lexicographically smaller endpoint so path(b, a) is exactly reverse(path(a, b)).
std::vector<std::string> path_between(const Topology &t, std::string_view a,
                                      std::string_view b);

double effective_bandwidth(const Topology &t, std::string_view link_id,
                           std::string_view slice_id);

std::vector<Violation> validate_slice(const Topology &t, std::string_view slice_id);

/// Sum of one-way link latencies along a path.
double path_latency_ms(const Topology &t, const std::vector<std::string> &path);

/// Jitter-free transfer time between two nodes: per-link latency plus
/// serialization at the slice's effective bandwidth; loopback when a == b.
double expected_transfer_ms(const Topology &t, std::string_view slice_id,
                            std::string_view from, std::string_view to,
                            std::uint64_t bytes);

/// Serialization delay of a payload at the given rate.
inline double serialization_ms(std::uint64_t bytes, double mbps) {
  return static_cast<double>(bytes) * 8.0 / (mbps * 1e6) * 1000.0;
}

} // namespace netros
