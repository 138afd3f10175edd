#include "netros/cli.hpp"

#include "netros/error.hpp"
#include "netros/sim/simulator.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <future>
#include <iostream>
#include <limits>
#include <sstream>

namespace netros::cli {

namespace {

int exit_code_for(ErrorCode code) {
  switch (code) {
  case ErrorCode::NonConvergence:
  case ErrorCode::NoRoot: return kNonConvergence;
  case ErrorCode::Infeasible:
  case ErrorCode::NoFeasible: return kInfeasible;
  default: return kUsage;
  }
}

std::vector<Policy> parse_policy_list(const std::string &text) {
  std::vector<Policy> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    Policy p = parse_policy(item);
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  }
  if (out.empty()) throw Error(ErrorCode::Parse, "policy list is empty");
  return out;
}

void ensure_dir(const std::filesystem::path &dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create '" + dir.string() + "': " + ec.message());
}

/// Lists every workload violation when the scenario fails to load.
void explain_scenario_failure(const RunConfig &config, std::ostream &err) {
  if (!config.scenario_path) return;
  try {
    auto doc = read_json_file(*config.scenario_path);
    auto violations = validate_workload(parse_workload(doc));
    for (const auto &v : violations) {
      err << "  " << to_string(v.code) << " [" << v.subject << "]: " << v.message << "\n";
    }
  } catch (const std::exception &) {
  }
}

std::string placement_text(const Placement &p) {
  std::string out = "Placement (" + std::string(to_string(p.policy)) + ")\n";
  for (const auto &[task, node] : p.assignment) out += "  " + task + " -> " + node + "\n";
  return out;
}

} // namespace

Scenario load_run_scenario(const RunConfig &config) {
  Scenario s = config.scenario_path
                   ? load_scenario_document(read_json_file(*config.scenario_path))
                   : load_scenario_document(builtin_airport_scenario());
  if (config.params_path) s = calibrate::apply_fitted(s, calibrate::load_params(*config.params_path));
  return s;
}

PolicyResult run_policy(const Scenario &scenario, Policy policy, const RunConfig &config,
                        bool record_events) {
  PolicyResult r;
  const auto &w = scenario.workload;
  const auto &t = scenario.topology;
  r.placement = place(policy, w, t, scenario.slice_id, PlacementOptions{scenario.hybrid_split});

  sim::SimOptions opt;
  opt.seed = config.seed;
  opt.horizon_ms = std::numeric_limits<double>::infinity();
  opt.stop_when_drivers_done = true;
  opt.record_events = record_events;
  opt.probe_rate_hz = config.rate_hz;
  opt.probe_limit = config.samples;
  opt.transaction_limit = config.samples;
  r.trace = sim::simulate(w, t, r.placement, scenario.slice_id, opt);

  r.latency = kpi::summarize(r.trace.probe_rtts_ms);
  r.load = kpi::robot_load(r.trace);
  if (!w.pipelines.empty()) {
    std::vector<sim::TransactionSample> primary;
    for (const auto &s : r.trace.transactions) {
      if (s.pipeline == w.pipelines.front().id) primary.push_back(s);
    }
    r.response = kpi::response_times(primary);
  }
  return r;
}

int cmd_calibrate(const std::optional<std::filesystem::path> &targets_path,
                  const RunConfig &config, std::ostream &out, std::ostream &err) {
  try {
    auto targets = targets_path ? calibrate::load_targets(*targets_path)
                                : calibrate::CalibrationTargets::defaults();
    RunConfig base = config;
    base.params_path.reset();
    Scenario scenario = load_run_scenario(base);
    auto params = calibrate::calibrate(targets, scenario);

    auto path = config.params_path ? *config.params_path : config.out_dir / "fitted_params.json";
    if (path.has_parent_path()) ensure_dir(path.parent_path());
    write_text_file(path, calibrate::to_json(params).dump(2) + "\n");

    char line[160];
    std::snprintf(line, sizeof line, "residual %.6f after %d iterations\n", params.residual,
                  params.iterations);
    out << line;
    auto fitted = calibrate::apply_fitted(scenario, params);
    for (const auto &[name, pt] : calibrate::predicted_vs_target(targets, fitted)) {
      std::snprintf(line, sizeof line, "  %-22s model %10.3f  target %10.3f\n", name.c_str(),
                    pt.first, pt.second);
      out << line;
    }
    out << "wrote " << path.string() << "\n";
    return kOk;
  } catch (const Error &e) {
    err << "calibrate: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
}

int cmd_compare(const RunConfig &config, std::ostream &out, std::ostream &err) {
  try {
    Scenario scenario = load_run_scenario(config);
    // Independent simulations; results are written only after all finish.
    std::vector<std::future<PolicyResult>> jobs;
    for (Policy p : config.policies) {
      jobs.push_back(std::async(std::launch::async, [&scenario, p, &config] {
        return run_policy(scenario, p, config, false);
      }));
    }
    kpi::LatencyReport latency;
    kpi::LoadReport load;
    kpi::ResponseReport response;
    std::vector<Error> failures;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      try {
        auto r = jobs[i].get();
        latency[config.policies[i]] = r.latency;
        load[config.policies[i]] = r.load;
        response[config.policies[i]] = r.response;
      } catch (const Error &e) {
        failures.push_back(e);
      }
    }
    if (!failures.empty()) throw failures.front();

    bool complete = true;
    for (Policy p : {Policy::Local, Policy::EdgeOnly, Policy::CloudOnly, Policy::NetRosHybrid}) {
      complete = complete && latency.count(p);
    }
    std::string report = complete ? kpi::render_report(latency, load, response)
                                  : kpi::render_partial_report(latency, load, response);
    ensure_dir(config.out_dir);
    kpi::export_csv(latency, config.out_dir / "latency.csv");
    kpi::export_csv(load, config.out_dir / "load.csv");
    kpi::export_csv(response, config.out_dir / "response.csv");
    write_text_file(config.out_dir / "report.txt", report);
    out << report;
    return kOk;
  } catch (const Error &e) {
    err << "compare: " << e.what() << "\n";
    if (e.code() != ErrorCode::Infeasible) explain_scenario_failure(config, err);
    return exit_code_for(e.code());
  }
}

int cmd_run(const RunConfig &config, Policy policy, std::ostream &out, std::ostream &err) {
  try {
    Scenario scenario = load_run_scenario(config);
    auto r = run_policy(scenario, policy, config, true);
    std::string report = placement_text(r.placement) + "\n" +
                         kpi::render_partial_report({{policy, r.latency}}, {{policy, r.load}},
                                                    {{policy, r.response}});
    ensure_dir(config.out_dir);
    write_text_file(config.out_dir / "trace.csv", r.trace.to_csv());
    write_text_file(config.out_dir / "report.txt", report);
    out << report;
    return kOk;
  } catch (const Error &e) {
    err << "run: " << e.what() << "\n";
    if (e.code() != ErrorCode::Infeasible) explain_scenario_failure(config, err);
    return exit_code_for(e.code());
  }
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Robot/edge/cloud placement simulator", "netros"};
  app.require_subcommand(1);

  RunConfig config;
  std::string scenario;
  std::string params;
  std::string targets;
  std::string policies = "local,edge,cloud,hybrid";
  std::string policy;
  std::string out_dir = "out";

  auto add_common = [&](CLI::App *cmd) {
    cmd->add_option("--scenario", scenario, "Scenario JSON (default: builtin airport robot)");
    cmd->add_option("--params", params, "Fitted parameter JSON");
    cmd->add_option("--seed", config.seed, "Random seed")->capture_default_str();
    cmd->add_option("--out", out_dir, "Output directory")->capture_default_str();
  };
  auto add_sampling = [&](CLI::App *cmd) {
    cmd->add_option("--samples", config.samples, "Probes and requests per policy")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--rate-hz", config.rate_hz, "Probe rate")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  };

  auto *calibrate_cmd = app.add_subcommand("calibrate", "Fit model parameters to targets");
  add_common(calibrate_cmd);
  calibrate_cmd->add_option("--targets", targets, "Targets JSON (default: builtin targets)");

  auto *compare_cmd = app.add_subcommand("compare", "Run several policies and report KPIs");
  add_common(compare_cmd);
  add_sampling(compare_cmd);
  compare_cmd->add_option("--policies", policies, "Comma-separated policy list")
      ->capture_default_str();

  auto *run_cmd = app.add_subcommand("run", "Run one policy and dump its trace");
  add_common(run_cmd);
  add_sampling(run_cmd);
  run_cmd->add_option("--policy", policy, "local, edge, cloud, hybrid or oracle")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  if (!scenario.empty()) config.scenario_path = scenario;
  if (!params.empty()) config.params_path = params;
  config.out_dir = out_dir;

  try {
    if (calibrate_cmd->parsed()) {
      return cmd_calibrate(targets.empty() ? std::nullopt
                                           : std::optional<std::filesystem::path>(targets),
                           config, out, err);
    }
    if (compare_cmd->parsed()) {
      config.policies = parse_policy_list(policies);
      return cmd_compare(config, out, err);
    }
    return cmd_run(config, parse_policy(policy), out, err);
  } catch (const Error &e) {
    err << e.what() << "\n" << app.help();
    return exit_code_for(e.code());
  }
}

} // namespace netros::cli
