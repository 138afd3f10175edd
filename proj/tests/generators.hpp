#pragma once

// Random but valid scenarios for the property and oracle tests.

#include "netros/scenario.hpp"

#include <algorithm>
#include <random>
#include <string>

namespace netros::testgen {

inline double uniform(std::mt19937_64 &rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(std::mt19937_64 &rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline double log_uniform(std::mt19937_64 &rng, double lo, double hi) {
  return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

struct TopologyOptions {
  /// Extra edge nodes beyond the first (each hangs off the robot).
  int extra_edges = 0;
  double jitter_cv = -1.0; // negative: random
  bool isolated = true;
};

/// robot -- edge -- cloud, optionally more edges, all in slice "s".
inline Topology random_topology(std::mt19937_64 &rng, TopologyOptions opt = {}) {
  Topology t;
  t.loopback_one_way_ms = uniform(rng, 0.001, 0.05);
  auto node = [&](std::string id, NodeRole role, int cores, double cap, double mem,
                  double base) {
    t.nodes.push_back({std::move(id), role, cores, cap, mem, base});
  };
  node("robot", NodeRole::Robot, uniform_int(rng, 1, 8), uniform(rng, 0.5, 2.0),
       uniform(rng, 8.0, 16.0), uniform(rng, 0.0, 0.2));
  node("edge", NodeRole::Edge, uniform_int(rng, 4, 32), uniform(rng, 1.0, 5.0), 256.0, 0.0);
  node("cloud", NodeRole::Cloud, uniform_int(rng, 16, 128), uniform(rng, 1.0, 6.0), 512.0, 0.0);
  auto jitter = [&] { return opt.jitter_cv >= 0.0 ? opt.jitter_cv : uniform(rng, 0.0, 0.3); };
  t.links.push_back({"robot-edge", "robot", "edge", uniform(rng, 0.1, 5.0),
                     log_uniform(rng, 100.0, 10000.0), jitter()});
  t.links.push_back({"edge-cloud", "edge", "cloud", uniform(rng, 5.0, 40.0),
                     log_uniform(rng, 5.0, 1000.0), jitter()});
  for (int i = 0; i < opt.extra_edges; ++i) {
    std::string id = "edge" + std::to_string(i + 2);
    node(id, NodeRole::Edge, uniform_int(rng, 2, 16), uniform(rng, 1.0, 4.0), 128.0, 0.0);
    t.links.push_back({"robot-" + id, "robot", id, uniform(rng, 0.1, 5.0),
                       log_uniform(rng, 100.0, 10000.0), jitter()});
  }
  NetworkSlice s;
  s.id = "s";
  for (const auto &n : t.nodes) s.member_nodes.insert(n.id);
  for (const auto &l : t.links) s.member_links.insert(l.id);
  s.bandwidth_share = uniform(rng, 0.2, 1.0);
  s.isolated = opt.isolated;
  t.slices.push_back(s);
  return t;
}

struct WorkloadOptions {
  int min_movable = 2;
  int max_movable = 7;
  bool with_pipeline = true;
};

/// Anchors publish sensor topics; movable tasks subscribe and republish.
/// Every subscription has a publisher and pipeline stages are distinct tasks.
inline Workload random_workload(std::mt19937_64 &rng, WorkloadOptions opt = {}) {
  Workload w;
  int n_anchor = uniform_int(rng, 1, 3);
  int n_movable = uniform_int(rng, opt.min_movable, opt.max_movable);
  int n_topics = uniform_int(rng, 2, 6);
  for (int i = 0; i < n_topics; ++i) {
    w.topics.push_back({"topic" + std::to_string(i),
                        static_cast<std::uint64_t>(log_uniform(rng, 64.0, 2e6)),
                        uniform(rng, 0.5, 30.0)});
  }
  for (int i = 0; i < n_anchor; ++i) {
    ServiceTask t;
    t.id = "anchor" + std::to_string(i);
    t.task_class = TaskClass::Anchor;
    t.pinned_to_robot = true;
    t.work_per_request = uniform(rng, 0.0, 0.005);
    t.memory_gb = uniform(rng, 0.01, 0.2);
    w.tasks.push_back(t);
  }
  for (int i = 0; i < n_movable; ++i) {
    ServiceTask t;
    t.id = "task" + std::to_string(i);
    t.task_class = uniform_int(rng, 0, 1) ? TaskClass::LatencyCritical : TaskClass::DataHeavy;
    t.work_per_request = log_uniform(rng, 0.001, 0.1);
    t.memory_gb = uniform(rng, 0.01, 1.0);
    w.tasks.push_back(t);
  }
  // Each topic gets exactly one publisher; the first topic is a sensor feed.
  for (int i = 0; i < n_topics; ++i) {
    int pub = i == 0 ? uniform_int(rng, 0, n_anchor - 1)
                     : uniform_int(rng, 0, static_cast<int>(w.tasks.size()) - 1);
    w.tasks[pub].publishes.insert(w.topics[i].name);
  }
  for (auto &task : w.tasks) {
    for (const auto &topic : w.topics) {
      if (task.publishes.count(topic.name)) continue;
      if (uniform(rng, 0.0, 1.0) < 0.3) task.subscribes.insert(topic.name);
    }
  }
  if (opt.with_pipeline && n_movable >= 1) {
    RequestPipeline p;
    p.id = "pipe";
    int n_stages = uniform_int(rng, 1, std::min(3, n_movable));
    std::vector<int> idx(n_movable);
    for (int i = 0; i < n_movable; ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), rng);
    double remaining = 1.0;
    for (int s = 0; s < n_stages; ++s) {
      double f = s + 1 == n_stages ? remaining : remaining * uniform(rng, 0.2, 0.8);
      remaining -= f;
      p.stages.push_back({"task" + std::to_string(idx[s]), f});
    }
    p.trigger_topic = w.topics.front().name;
    p.response_topic = w.topics.back().name;
    p.payload_bytes = static_cast<std::uint64_t>(log_uniform(rng, 1e3, 1e6));
    p.stage_payload_bytes = static_cast<std::uint64_t>(log_uniform(rng, 1e3, 1e6));
    p.result_bytes = static_cast<std::uint64_t>(log_uniform(rng, 64.0, 1e4));
    p.display_overhead_ms = uniform(rng, 0.0, 50.0);
    w.pipelines.push_back(p);
  }
  return w;
}

/// Builtin scenario as a parsed, validated value.
inline Scenario builtin() { return load_scenario_document(builtin_airport_scenario()); }

} // namespace netros::testgen
