#pragma once

#include "netros/kpi.hpp"
#include "netros/placement.hpp"
#include "netros/scenario.hpp"

#include <filesystem>
#include <map>

namespace netros::calibrate {

struct LoadBand {
  double cpu_low_pct = 0.0;
  double cpu_high_pct = 0.0;
  double memory_gb = 0.0;
};

/// Measured numbers the fitted model has to reproduce.
struct CalibrationTargets {
  double local_rtt_ms = 0.016;
  double cloud_rtt_ms = 38.0;
  double edge_vs_cloud_spd_pct = 183.548;
  std::map<Policy, LoadBand> load;
  std::map<Policy, kpi::ResponseRow> response;

  static CalibrationTargets defaults();
  /// Throws InvalidTargets: non-positive values, response below recognition,
  /// or a missing local/edge/cloud/hybrid row.
  void validate() const;
};

Document to_json(const CalibrationTargets &t);
CalibrationTargets targets_from_json(const Document &doc);
CalibrationTargets load_targets(const std::filesystem::path &path);

struct FittedParams {
  double edge_one_way_ms = 0.0;
  double cloud_extra_one_way_ms = 0.0;
  double loopback_one_way_ms = 0.0;
  double edge_capacity = 0.0;
  double cloud_capacity = 0.0;
  /// Held fixed; only the ratio to bandwidth is identifiable.
  double image_payload_bytes = 200'000.0;
  double stage_payload_bytes = 0.0;
  double display_overhead_ms = 0.0;
  /// Raw link bandwidth; the slice share applies on top.
  double internet_bandwidth_mbps = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

Document to_json(const FittedParams &p);
FittedParams params_from_json(const Document &doc);
FittedParams load_params(const std::filesystem::path &path);

struct LatencyFit {
  double edge_rtt_ms = 0.0;
  double edge_one_way_ms = 0.0;
  double cloud_extra_one_way_ms = 0.0;
  double loopback_one_way_ms = 0.0;
};

/// Inverts spd(cloud_rtt, x) = edge_vs_cloud_spd_pct by bisection; NoRoot
/// when the target lies outside (0, 200).
LatencyFit fit_latency(const CalibrationTargets &targets);

struct FitOptions {
  int max_iterations = 200;
  double tolerance = 1e-4;
  double max_residual = 0.15;
};

/// Capacities from the recognition rows, then display overhead, internet
/// bandwidth and stage payload by coordinate descent on the response rows.
/// Throws NonConvergence if the residual stays above `max_residual`.
FittedParams fit_capacity(const CalibrationTargets &targets, const Scenario &scenario,
                          const LatencyFit &latency, const FitOptions &options = {});

/// fit_latency followed by fit_capacity.
FittedParams calibrate(const CalibrationTargets &targets, const Scenario &scenario,
                       const FitOptions &options = {});

/// Writes the fitted values into the scenario's links, nodes and pipelines.
Scenario apply_fitted(Scenario scenario, const FittedParams &params);

/// Model predictions (no simulation) for every target, keyed by name.
std::map<std::string, std::pair<double, double>>
predicted_vs_target(const CalibrationTargets &targets, const Scenario &fitted);

/// Largest relative error in `predicted_vs_target`.
double residual(const CalibrationTargets &targets, const Scenario &fitted);

} // namespace netros::calibrate
