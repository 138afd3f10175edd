#pragma once

#include "netros/placement.hpp"
#include "netros/sim/rng.hpp"
#include "netros/sim/station.hpp"
#include "netros/sim/trace.hpp"
#include "netros/topology.hpp"
#include "netros/workload.hpp"

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace netros::sim {

struct SimOptions {
  double horizon_ms = 10'000.0;
  std::uint64_t seed = 42;
  double sample_interval_ms = 1'000.0;
  /// Coefficient of variation applied to every job's work.
  double work_cv = 0.1;
  Discipline discipline = Discipline::ProcessorSharing;
  bool periodic_traffic = true;
  bool record_events = true;

  /// Teleoperation echo probes from the robot to this task's host.
  std::string probe_task = "navigation";
  double probe_rate_hz = 1.0;
  std::uint64_t probe_bytes = 64;
  /// 0 means keep probing until the horizon.
  std::size_t probe_limit = 0;

  bool run_pipelines = true;
  /// Restrict the closed-loop pipeline driver to one pipeline; empty runs all.
  std::string pipeline_id;
  /// 0 means keep issuing requests until the horizon.
  std::size_t transaction_limit = 0;

  /// End the run once every limited driver has delivered its quota.
  bool stop_when_drivers_done = false;
};

/// One traversal of a link: lognormal latency (mean one_way_latency_ms,
/// cv jitter_cv) plus serialization at the slice's effective bandwidth.
double transit_time(const Topology &t, const NetworkLink &link, std::string_view slice_id,
                    std::uint64_t payload_bytes, std::mt19937_64 &rng);

/// Idle-node service time of one stage; `concurrent` jobs share the cores.
double service_time(const ServiceTask &task, double stage_fraction, const ComputeNode &node,
                    std::size_t concurrent = 1);

TraceLog simulate(const Workload &w, const Topology &t, const Placement &p,
                  std::string_view slice_id, const SimOptions &options);

TraceLog run_simulation(const Workload &w, const Topology &t, const Placement &p,
                        std::string_view slice_id, double duration_ms, std::uint64_t seed);

/// Round-trip times robot <-> navigation host, `n_samples` of them.
std::vector<double> teleop_probe(const Workload &w, const Topology &t, const Placement &p,
                                 std::string_view slice_id, std::size_t n_samples,
                                 double rate_hz, std::uint64_t seed);

/// Sequential requests through the first pipeline (or `pipeline_id`).
std::vector<TransactionSample> face_recognition_transaction(
    const Workload &w, const Topology &t, const Placement &p, std::string_view slice_id,
    std::size_t n_requests, std::uint64_t seed, const std::string &pipeline_id = {});

} // namespace netros::sim
