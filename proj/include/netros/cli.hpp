#pragma once

#include "netros/calibrate.hpp"
#include "netros/kpi.hpp"
#include "netros/placement.hpp"
#include "netros/scenario.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace netros::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kNonConvergence = 2,
  kInfeasible = 3,
};

struct RunConfig {
  std::optional<std::filesystem::path> scenario_path;
  std::optional<std::filesystem::path> params_path;
  std::vector<Policy> policies = {Policy::Local, Policy::EdgeOnly, Policy::CloudOnly,
                                  Policy::NetRosHybrid};
  std::uint64_t seed = 42;
  std::size_t samples = 1000;
  double rate_hz = 1.0;
  std::filesystem::path out_dir = "out";
};

/// KPIs collected for one policy.
struct PolicyResult {
  Placement placement;
  sim::TraceLog trace;
  kpi::Summary latency;
  kpi::LoadRow load;
  kpi::ResponseRow response;
};

/// Scenario from file (or the builtin one) with fitted params applied if given.
Scenario load_run_scenario(const RunConfig &config);

/// Places and simulates one policy: `samples` probes and `samples` requests.
PolicyResult run_policy(const Scenario &scenario, Policy policy, const RunConfig &config,
                        bool record_events);

int cmd_calibrate(const std::optional<std::filesystem::path> &targets_path,
                  const RunConfig &config, std::ostream &out, std::ostream &err);
int cmd_compare(const RunConfig &config, std::ostream &out, std::ostream &err);
int cmd_run(const RunConfig &config, Policy policy, std::ostream &out, std::ostream &err);

/// Parses argv-style arguments (without the program name) and dispatches.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace netros::cli
