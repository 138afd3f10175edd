#include "netros/calibrate.hpp"

#include "netros/error.hpp"

#include <array>
#include <cmath>
#include <functional>

namespace netros::calibrate {

namespace {

constexpr Policy kTablePolicies[] = {Policy::Local, Policy::EdgeOnly, Policy::CloudOnly,
                                     Policy::NetRosHybrid};

constexpr double kDisplayMinMs = 0.0;
constexpr double kDisplayMaxMs = 200.0;
constexpr double kBandwidthMinMbps = 1.0;
constexpr double kBandwidthMaxMbps = 10'000.0;
constexpr double kStagePayloadMin = 1e3;
constexpr double kStagePayloadMax = 1e7;

double number(const Document &doc, const char *key) {
  if (!doc.contains(key)) throw Error(ErrorCode::InvalidTargets, std::string("missing '") + key + "'");
  const auto &v = doc.at(key);
  if (!v.is_number()) throw Error(ErrorCode::InvalidTargets, std::string("'") + key + "' is not a number");
  return v.get<double>();
}

const RequestPipeline &primary_pipeline(const Scenario &s) {
  if (s.workload.pipelines.empty()) {
    throw Error(ErrorCode::InvalidWorkload, "calibration needs a request pipeline");
  }
  return s.workload.pipelines.front();
}

struct Anchors {
  std::string robot;
  std::string edge;
  std::string cloud;
};

Anchors anchor_nodes(const Topology &t) {
  const auto *edge = t.first_with_role(NodeRole::Edge);
  const auto *cloud = t.first_with_role(NodeRole::Cloud);
  if (!edge || !cloud) {
    throw Error(ErrorCode::InvalidValue, "calibration needs an edge and a cloud node");
  }
  return {t.robot().id, edge->id, cloud->id};
}

NetworkLink &mutable_link(Topology &t, const std::string &a, const std::string &b) {
  const auto *link = t.link_between(a, b);
  if (!link) {
    throw Error(ErrorCode::InvalidValue, "no direct link between '" + a + "' and '" + b + "'");
  }
  for (auto &l : t.links) {
    if (l.id == link->id) return l;
  }
  throw Error(ErrorCode::DanglingReference, "link vanished");
}

ComputeNode &mutable_node(Topology &t, const std::string &id) {
  for (auto &n : t.nodes) {
    if (n.id == id) return n;
  }
  throw Error(ErrorCode::UnknownNode, "unknown node '" + id + "'");
}

/// Minimizes f over [lo, hi] by golden-section search.
double golden_section(const std::function<double(double)> &f, double lo, double hi,
                      int steps = 80) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < steps; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return (a + b) / 2.0;
}

} // namespace

CalibrationTargets CalibrationTargets::defaults() {
  CalibrationTargets t;
  t.load = {{Policy::Local, {65.0, 80.0, 1.82}},
            {Policy::EdgeOnly, {28.0, 35.0, 0.95}},
            {Policy::CloudOnly, {12.0, 17.0, 0.51}},
            {Policy::NetRosHybrid, {12.0, 18.0, 0.51}}};
  t.response = {{Policy::Local, {2354.0, 2383.0}},
                {Policy::EdgeOnly, {596.0, 615.0}},
                {Policy::CloudOnly, {587.0, 684.0}},
                {Policy::NetRosHybrid, {657.0, 698.0}}};
  return t;
}

void CalibrationTargets::validate() const {
  auto bad = [](const std::string &what) { throw Error(ErrorCode::InvalidTargets, what); };
  for (double v : {local_rtt_ms, cloud_rtt_ms, edge_vs_cloud_spd_pct}) {
    if (!(v > 0.0) || !std::isfinite(v)) bad("latency targets must be positive");
  }
  for (Policy p : kTablePolicies) {
    if (!response.count(p)) bad("missing response row for '" + std::string(to_string(p)) + "'");
  }
  for (const auto &[p, row] : response) {
    if (!(row.recognition_ms > 0.0) || !(row.response_ms > 0.0)) {
      bad("response targets must be positive");
    }
    if (row.response_ms < row.recognition_ms) {
      bad("response below recognition for '" + std::string(to_string(p)) + "'");
    }
  }
  for (const auto &[p, band] : load) {
    if (band.cpu_low_pct < 0.0 || band.cpu_high_pct < band.cpu_low_pct || band.memory_gb < 0.0) {
      bad("malformed load band for '" + std::string(to_string(p)) + "'");
    }
  }
}

Document to_json(const CalibrationTargets &t) {
  Document doc = {{"local_rtt_ms", t.local_rtt_ms},
                  {"cloud_rtt_ms", t.cloud_rtt_ms},
                  {"edge_vs_cloud_spd_pct", t.edge_vs_cloud_spd_pct}};
  Document load = Document::object();
  for (const auto &[p, b] : t.load) {
    load[std::string(to_string(p))] = {
        {"cpu_low_pct", b.cpu_low_pct}, {"cpu_high_pct", b.cpu_high_pct}, {"memory_gb", b.memory_gb}};
  }
  Document response = Document::object();
  for (const auto &[p, r] : t.response) {
    response[std::string(to_string(p))] = {{"recognition_ms", r.recognition_ms},
                                           {"response_ms", r.response_ms}};
  }
  doc["load"] = load;
  doc["response"] = response;
  return doc;
}

CalibrationTargets targets_from_json(const Document &doc) {
  if (!doc.is_object()) throw Error(ErrorCode::InvalidTargets, "targets must be an object");
  CalibrationTargets t;
  try {
    t.local_rtt_ms = number(doc, "local_rtt_ms");
    t.cloud_rtt_ms = number(doc, "cloud_rtt_ms");
    t.edge_vs_cloud_spd_pct = number(doc, "edge_vs_cloud_spd_pct");
    if (doc.contains("load")) {
      for (const auto &[key, band] : doc.at("load").items()) {
        t.load[parse_policy(key)] = {number(band, "cpu_low_pct"), number(band, "cpu_high_pct"),
                                     number(band, "memory_gb")};
      }
    }
    if (!doc.contains("response")) throw Error(ErrorCode::InvalidTargets, "missing 'response'");
    for (const auto &[key, row] : doc.at("response").items()) {
      t.response[parse_policy(key)] = {number(row, "recognition_ms"), number(row, "response_ms")};
    }
  } catch (const Error &e) {
    if (e.code() == ErrorCode::InvalidTargets) throw;
    throw Error(ErrorCode::InvalidTargets, e.what());
  }
  t.validate();
  return t;
}

CalibrationTargets load_targets(const std::filesystem::path &path) {
  return targets_from_json(read_json_file(path));
}

Document to_json(const FittedParams &p) {
  return {{"edge_one_way_ms", p.edge_one_way_ms},
          {"cloud_extra_one_way_ms", p.cloud_extra_one_way_ms},
          {"loopback_one_way_ms", p.loopback_one_way_ms},
          {"edge_capacity", p.edge_capacity},
          {"cloud_capacity", p.cloud_capacity},
          {"image_payload_bytes", p.image_payload_bytes},
          {"stage_payload_bytes", p.stage_payload_bytes},
          {"display_overhead_ms", p.display_overhead_ms},
          {"internet_bandwidth_mbps", p.internet_bandwidth_mbps},
          {"residual", p.residual},
          {"iterations", p.iterations}};
}

FittedParams params_from_json(const Document &doc) {
  FittedParams p;
  try {
    p.edge_one_way_ms = doc.at("edge_one_way_ms").get<double>();
    p.cloud_extra_one_way_ms = doc.at("cloud_extra_one_way_ms").get<double>();
    p.loopback_one_way_ms = doc.at("loopback_one_way_ms").get<double>();
    p.edge_capacity = doc.at("edge_capacity").get<double>();
    p.cloud_capacity = doc.at("cloud_capacity").get<double>();
    p.image_payload_bytes = doc.at("image_payload_bytes").get<double>();
    p.stage_payload_bytes = doc.at("stage_payload_bytes").get<double>();
    p.display_overhead_ms = doc.at("display_overhead_ms").get<double>();
    p.internet_bandwidth_mbps = doc.at("internet_bandwidth_mbps").get<double>();
    p.residual = doc.value("residual", 0.0);
    p.iterations = doc.value("iterations", 0);
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::Parse, std::string("fitted params: ") + e.what());
  }
  for (double v : {p.edge_one_way_ms, p.cloud_extra_one_way_ms, p.loopback_one_way_ms,
                   p.edge_capacity, p.cloud_capacity, p.image_payload_bytes,
                   p.stage_payload_bytes, p.internet_bandwidth_mbps}) {
    if (!(v > 0.0)) throw Error(ErrorCode::InvalidValue, "fitted params must be positive");
  }
  if (p.display_overhead_ms < 0.0) {
    throw Error(ErrorCode::InvalidValue, "display overhead must be non-negative");
  }
  return p;
}

FittedParams load_params(const std::filesystem::path &path) {
  return params_from_json(read_json_file(path));
}

LatencyFit fit_latency(const CalibrationTargets &targets) {
  double target = targets.edge_vs_cloud_spd_pct;
  double cloud = targets.cloud_rtt_ms;
  if (!(target > 0.0 && target < 200.0) || !(cloud > 0.0)) {
    throw Error(ErrorCode::NoRoot, "spd target outside (0, 200) has no root");
  }
  // spd(cloud, x) falls monotonically from 200 at x = 0 to 0 at x = cloud.
  double lo = 0.0;
  double hi = cloud;
  double x = cloud / 2.0;
  for (int i = 0; i < 200; ++i) {
    x = (lo + hi) / 2.0;
    double f = kpi::symmetric_percent_difference(cloud, x) - target;
    if (std::fabs(f) < 1e-9) break;
    (f > 0.0 ? lo : hi) = x;
  }
  LatencyFit fit;
  fit.edge_rtt_ms = x;
  fit.edge_one_way_ms = x / 2.0;
  fit.cloud_extra_one_way_ms = cloud / 2.0 - fit.edge_one_way_ms;
  fit.loopback_one_way_ms = targets.local_rtt_ms / 2.0;
  if (!(fit.cloud_extra_one_way_ms > 0.0)) {
    throw Error(ErrorCode::NoRoot, "edge round trip exceeds cloud round trip");
  }
  return fit;
}

Scenario apply_fitted(Scenario scenario, const FittedParams &params) {
  auto &t = scenario.topology;
  auto nodes = anchor_nodes(t);
  mutable_link(t, nodes.robot, nodes.edge).one_way_latency_ms = params.edge_one_way_ms;
  auto &internet = mutable_link(t, nodes.edge, nodes.cloud);
  internet.one_way_latency_ms = params.cloud_extra_one_way_ms;
  internet.bandwidth_mbps = params.internet_bandwidth_mbps;
  t.loopback_one_way_ms = params.loopback_one_way_ms;
  mutable_node(t, nodes.edge).capacity_per_core = params.edge_capacity;
  mutable_node(t, nodes.cloud).capacity_per_core = params.cloud_capacity;
  for (auto &pipe : scenario.workload.pipelines) {
    pipe.payload_bytes = static_cast<std::uint64_t>(std::llround(params.image_payload_bytes));
    pipe.stage_payload_bytes =
        static_cast<std::uint64_t>(std::llround(params.stage_payload_bytes));
    pipe.display_overhead_ms = params.display_overhead_ms;
  }
  return scenario;
}

std::map<std::string, std::pair<double, double>>
predicted_vs_target(const CalibrationTargets &targets, const Scenario &fitted) {
  std::map<std::string, std::pair<double, double>> out;
  const auto &t = fitted.topology;
  const auto &w = fitted.workload;
  PlacementOptions opts{fitted.hybrid_split};
  const auto &pipe = primary_pipeline(fitted);
  const std::string robot = t.robot().id;

  double edge_rtt = targets.cloud_rtt_ms;
  try {
    edge_rtt = fit_latency(targets).edge_rtt_ms;
  } catch (const Error &) {
  }
  const std::map<Policy, double> rtt_targets = {{Policy::Local, targets.local_rtt_ms},
                                                {Policy::EdgeOnly, edge_rtt},
                                                {Policy::CloudOnly, targets.cloud_rtt_ms}};
  for (Policy policy : kTablePolicies) {
    auto p = place(policy, w, t, fitted.slice_id, opts);
    std::string name(to_string(policy));
    if (rtt_targets.count(policy) && w.find_task("navigation")) {
      const std::string &host = p.node_of("navigation");
      double rtt = expected_transfer_ms(t, fitted.slice_id, robot, host, 64) +
                   expected_transfer_ms(t, fitted.slice_id, host, robot, 64);
      out["rtt/" + name] = {rtt, rtt_targets.at(policy)};
    }
    if (targets.response.count(policy)) {
      auto est = estimate_transaction(pipe, w, p, t, fitted.slice_id);
      const auto &row = targets.response.at(policy);
      out["recognition/" + name] = {est.recognition_ms(), row.recognition_ms};
      out["response/" + name] = {est.response_ms(), row.response_ms};
    }
  }
  return out;
}

double residual(const CalibrationTargets &targets, const Scenario &fitted) {
  double worst = 0.0;
  for (const auto &[_, pt] : predicted_vs_target(targets, fitted)) {
    worst = std::max(worst, std::fabs(pt.first - pt.second) / pt.second);
  }
  return worst;
}

FittedParams fit_capacity(const CalibrationTargets &targets, const Scenario &scenario,
                          const LatencyFit &latency, const FitOptions &options) {
  targets.validate();
  const auto &pipe = primary_pipeline(scenario);
  const auto &w = scenario.workload;
  const auto &t = scenario.topology;
  auto nodes = anchor_nodes(t);

  double work = 0.0;
  for (const auto &stage : pipe.stages) work += w.task(stage.task).work_per_request * stage.fraction;
  double robot_capacity = t.robot().capacity_per_core;
  double local_ms = work / robot_capacity * 1000.0;

  FittedParams params;
  params.edge_one_way_ms = latency.edge_one_way_ms;
  params.cloud_extra_one_way_ms = latency.cloud_extra_one_way_ms;
  params.loopback_one_way_ms = latency.loopback_one_way_ms;
  // Recognition rows are compute-dominated: scale the robot by the observed speedup.
  params.edge_capacity =
      robot_capacity * local_ms / targets.response.at(Policy::EdgeOnly).recognition_ms;
  params.cloud_capacity =
      robot_capacity * local_ms / targets.response.at(Policy::CloudOnly).recognition_ms;
  params.image_payload_bytes = static_cast<double>(pipe.payload_bytes);
  params.stage_payload_bytes = static_cast<double>(pipe.stage_payload_bytes);
  params.display_overhead_ms = pipe.display_overhead_ms;
  params.internet_bandwidth_mbps = t.link_between(nodes.edge, nodes.cloud)
                                       ? t.link_between(nodes.edge, nodes.cloud)->bandwidth_mbps
                                       : 20.0;

  // The free parameters do not move any task, so placements are fixed.
  PlacementOptions opts{scenario.hybrid_split};
  std::map<Policy, Placement> placements;
  for (Policy p : kTablePolicies) placements[p] = place(p, w, t, scenario.slice_id, opts);

  auto objective = [&](const FittedParams &candidate) {
    Scenario s = apply_fitted(scenario, candidate);
    const auto &fitted_pipe = s.workload.pipelines.front();
    double sum = 0.0;
    for (Policy p : kTablePolicies) {
      double target = targets.response.at(p).response_ms;
      double got = estimate_transaction(fitted_pipe, s.workload, placements.at(p), s.topology,
                                        s.slice_id)
                       .response_ms();
      double rel = (got - target) / target;
      sum += rel * rel;
    }
    return sum;
  };

  struct Coordinate {
    double FittedParams::*field;
    double lo;
    double hi;
    bool log_scale;
  };
  const std::array<Coordinate, 3> coords = {{
      {&FittedParams::display_overhead_ms, kDisplayMinMs, kDisplayMaxMs, false},
      {&FittedParams::internet_bandwidth_mbps, kBandwidthMinMbps, kBandwidthMaxMbps, true},
      {&FittedParams::stage_payload_bytes, kStagePayloadMin, kStagePayloadMax, true},
  }};

  double current = objective(params);
  int iteration = 0;
  while (iteration < options.max_iterations) {
    ++iteration;
    double before = current;
    for (const auto &c : coords) {
      auto eval = [&](double x) {
        FittedParams trial = params;
        trial.*c.field = c.log_scale ? std::exp(x) : x;
        return objective(trial);
      };
      double lo = c.log_scale ? std::log(c.lo) : c.lo;
      double hi = c.log_scale ? std::log(c.hi) : c.hi;
      double x = golden_section(eval, lo, hi);
      double value = eval(x);
      if (value < current) {
        params.*c.field = c.log_scale ? std::exp(x) : x;
        current = value;
      }
    }
    if (before - current < options.tolerance) break;
  }
  params.iterations = iteration;
  params.residual = residual(targets, apply_fitted(scenario, params));
  if (params.residual > options.max_residual) {
    char msg[128];
    std::snprintf(msg, sizeof msg, "calibration residual %.4f exceeds %.2f", params.residual,
                  options.max_residual);
    throw Error(ErrorCode::NonConvergence, msg);
  }
  return params;
}

FittedParams calibrate(const CalibrationTargets &targets, const Scenario &scenario,
                       const FitOptions &options) {
  return fit_capacity(targets, scenario, fit_latency(targets), options);
}

} // namespace netros::calibrate
