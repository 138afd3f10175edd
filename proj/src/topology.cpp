#include "netros/topology.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace netros {

namespace {

constexpr double kBandwidthFloorMbps = 0.1;

template <typename T>
const T *find_by_id(const std::vector<T> &items, std::string_view id) {
  auto it = std::find_if(items.begin(), items.end(),
                         [&](const T &item) { return item.id == id; });
  return it == items.end() ? nullptr : &*it;
}

template <typename T>
void require_unique_ids(const std::vector<T> &items, std::string_view what) {
  std::set<std::string> seen;
  for (const auto &item : items) {
    if (!seen.insert(item.id).second) {
      throw Error(ErrorCode::DuplicateId,
                  std::string(what) + " id '" + item.id + "' appears twice");
    }
  }
}

std::vector<std::string> bfs_path(const Topology &t, std::string_view from,
                                  std::string_view to) {
  std::map<std::string, std::string, std::less<>> via_link;
  std::set<std::string, std::less<>> seen{std::string(from)};
  std::deque<std::string> frontier{std::string(from)};

  // Links visited in id order keep the search deterministic.
  std::vector<const NetworkLink *> ordered;
  for (const auto &l : t.links) ordered.push_back(&l);
  std::sort(ordered.begin(), ordered.end(),
            [](const auto *x, const auto *y) { return x->id < y->id; });

  while (!frontier.empty()) {
    std::string current = frontier.front();
    frontier.pop_front();
    if (current == to) break;
    for (const auto *l : ordered) {
      if (!l->touches(current)) continue;
      const std::string &next = l->other(current);
      if (seen.insert(next).second) {
        via_link[next] = l->id;
        frontier.push_back(next);
      }
    }
  }
  if (!seen.count(to)) {
    throw Error(ErrorCode::NoPath, "no path from '" + std::string(from) +
                                       "' to '" + std::string(to) + "'");
  }
  std::vector<std::string> path;
  std::string cursor(to);
  while (cursor != from) {
    const std::string &link_id = via_link.at(cursor);
    path.push_back(link_id);
    cursor = t.link(link_id).other(cursor);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

} // namespace

std::string_view to_string(NodeRole role) {
  switch (role) {
  case NodeRole::Robot: return "Robot";
  case NodeRole::Edge: return "Edge";
  case NodeRole::Cloud: return "Cloud";
  }
  return "?";
}

NodeRole parse_node_role(std::string_view text) {
  if (text == "Robot" || text == "robot") return NodeRole::Robot;
  if (text == "Edge" || text == "edge") return NodeRole::Edge;
  if (text == "Cloud" || text == "cloud") return NodeRole::Cloud;
  throw Error(ErrorCode::Parse, "unknown node role '" + std::string(text) + "'");
}

const ComputeNode &Topology::node(std::string_view id) const {
  if (const auto *n = find_by_id(nodes, id)) return *n;
  throw Error(ErrorCode::UnknownNode, "unknown node '" + std::string(id) + "'");
}

const NetworkLink &Topology::link(std::string_view id) const {
  if (const auto *l = find_by_id(links, id)) return *l;
  throw Error(ErrorCode::DanglingReference, "unknown link '" + std::string(id) + "'");
}

const NetworkSlice &Topology::slice(std::string_view id) const {
  if (const auto *s = find_by_id(slices, id)) return *s;
  throw Error(ErrorCode::UnknownSlice, "unknown slice '" + std::string(id) + "'");
}

bool Topology::has_node(std::string_view id) const {
  return find_by_id(nodes, id) != nullptr;
}

const ComputeNode &Topology::robot() const {
  if (const auto *n = first_with_role(NodeRole::Robot)) return *n;
  throw Error(ErrorCode::InvalidValue, "topology has no robot node");
}

const ComputeNode *Topology::first_with_role(NodeRole role) const {
  const ComputeNode *best = nullptr;
  for (const auto &n : nodes) {
    if (n.role == role && (best == nullptr || n.id < best->id)) best = &n;
  }
  return best;
}

const NetworkLink *Topology::link_between(std::string_view a,
                                          std::string_view b) const {
  for (const auto &l : links) {
    if ((l.endpoint_a == a && l.endpoint_b == b) ||
        (l.endpoint_a == b && l.endpoint_b == a)) {
      return &l;
    }
  }
  return nullptr;
}

double Topology::background_mbps(std::string_view link_id) const {
  auto it = background_traffic_mbps.find(std::string(link_id));
  return it == background_traffic_mbps.end() ? 0.0 : it->second;
}

void validate_topology(const Topology &t) {
  require_unique_ids(t.nodes, "node");
  require_unique_ids(t.links, "link");
  require_unique_ids(t.slices, "slice");

  int robots = 0;
  for (const auto &n : t.nodes) {
    if (n.role == NodeRole::Robot) ++robots;
    if (n.cores <= 0 || !(n.capacity_per_core > 0.0) || n.memory_gb < 0.0 ||
        n.baseline_load_fraction < 0.0 || n.baseline_load_fraction > 1.0) {
      throw Error(ErrorCode::InvalidValue, "node '" + n.id + "' has out-of-range fields");
    }
  }
  if (robots != 1) {
    throw Error(ErrorCode::InvalidValue,
                "exactly one Robot node required, found " + std::to_string(robots));
  }

  std::set<std::pair<std::string, std::string>> pairs;
  for (const auto &l : t.links) {
    for (const auto *end : {&l.endpoint_a, &l.endpoint_b}) {
      if (!t.has_node(*end)) {
        throw Error(ErrorCode::DanglingReference,
                    "link '" + l.id + "' names unknown node '" + *end + "'");
      }
    }
    if (l.endpoint_a == l.endpoint_b) {
      throw Error(ErrorCode::InvalidValue, "link '" + l.id + "' is a self-loop");
    }
    if (l.one_way_latency_ms < 0.0 || !(l.bandwidth_mbps > 0.0) || l.jitter_cv < 0.0) {
      throw Error(ErrorCode::InvalidValue, "link '" + l.id + "' has out-of-range fields");
    }
    auto key = std::minmax(l.endpoint_a, l.endpoint_b);
    if (!pairs.insert({key.first, key.second}).second) {
      throw Error(ErrorCode::InvalidValue,
                  "more than one link between '" + key.first + "' and '" + key.second + "'");
    }
  }
  for (const auto &[link_id, mbps] : t.background_traffic_mbps) {
    if (find_by_id(t.links, link_id) == nullptr) {
      throw Error(ErrorCode::DanglingReference,
                  "background traffic names unknown link '" + link_id + "'");
    }
    if (mbps < 0.0) {
      throw Error(ErrorCode::InvalidValue, "negative background traffic on '" + link_id + "'");
    }
  }

  // Connectivity from the robot.
  std::set<std::string> reached{t.robot().id};
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto &l : t.links) {
      bool a = reached.count(l.endpoint_a) > 0;
      bool b = reached.count(l.endpoint_b) > 0;
      if (a != b) {
        reached.insert(a ? l.endpoint_b : l.endpoint_a);
        grew = true;
      }
    }
  }
  if (reached.size() != t.nodes.size()) {
    for (const auto &n : t.nodes) {
      if (!reached.count(n.id)) {
        throw Error(ErrorCode::DisconnectedGraph,
                    "node '" + n.id + "' is unreachable from the robot");
      }
    }
  }

  for (const auto &s : t.slices) {
    for (const auto &nid : s.member_nodes) {
      if (!t.has_node(nid)) {
        throw Error(ErrorCode::DanglingReference,
                    "slice '" + s.id + "' names unknown node '" + nid + "'");
      }
    }
    for (const auto &lid : s.member_links) {
      if (find_by_id(t.links, lid) == nullptr) {
        throw Error(ErrorCode::DanglingReference,
                    "slice '" + s.id + "' names unknown link '" + lid + "'");
      }
    }
    auto violations = validate_slice(t, s.id);
    if (!violations.empty()) {
      throw Error(violations.front().code, violations.front().message);
    }
  }
}

std::vector<std::string> path_between(const Topology &t, std::string_view a,
                                      std::string_view b) {
  t.node(a);
  t.node(b);
  if (a == b) return {};
  if (b < a) {
    auto path = bfs_path(t, b, a);
    std::reverse(path.begin(), path.end());
    return path;
  }
  return bfs_path(t, a, b);
}

double effective_bandwidth(const Topology &t, std::string_view link_id,
                           std::string_view slice_id) {
  const auto &s = t.slice(slice_id);
  const auto &l = t.link(link_id);
  if (!s.member_links.count(l.id)) {
    throw Error(ErrorCode::NotInSlice,
                "link '" + l.id + "' is not a member of slice '" + s.id + "'");
  }
  double share = l.bandwidth_mbps * s.bandwidth_share;
  if (s.isolated) return share;
  return std::max(kBandwidthFloorMbps, share - t.background_mbps(l.id));
}

std::vector<Violation> validate_slice(const Topology &t, std::string_view slice_id) {
  const auto &s = t.slice(slice_id);
  std::vector<Violation> out;
  if (!(s.bandwidth_share > 0.0) || s.bandwidth_share > 1.0) {
    out.push_back({ErrorCode::InvalidValue, s.id,
                   "slice '" + s.id + "' bandwidth_share " +
                       std::to_string(s.bandwidth_share) + " outside (0, 1]"});
  }
  for (const auto &lid : s.member_links) {
    const auto *l = find_by_id(t.links, lid);
    if (l == nullptr) {
      out.push_back({ErrorCode::DanglingReference, lid,
                     "slice '" + s.id + "' names unknown link '" + lid + "'"});
      continue;
    }
    for (const auto *end : {&l->endpoint_a, &l->endpoint_b}) {
      if (!s.member_nodes.count(*end)) {
        out.push_back({ErrorCode::InvalidValue, *end,
                       "slice '" + s.id + "' contains link '" + lid +
                           "' but not its endpoint '" + *end + "'"});
      }
    }
  }
  return out;
}

double path_latency_ms(const Topology &t, const std::vector<std::string> &path) {
  double total = 0.0;
  for (const auto &lid : path) total += t.link(lid).one_way_latency_ms;
  return total;
}

double expected_transfer_ms(const Topology &t, std::string_view slice_id,
                            std::string_view from, std::string_view to,
                            std::uint64_t bytes) {
  if (from == to) return t.loopback_one_way_ms;
  double total = 0.0;
  for (const auto &lid : path_between(t, from, to)) {
    total += t.link(lid).one_way_latency_ms +
             serialization_ms(bytes, effective_bandwidth(t, lid, slice_id));
  }
  return total;
}

} // namespace netros
