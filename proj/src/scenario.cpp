#include "netros/scenario.hpp"

#include <fstream>
#include <sstream>

namespace netros {

namespace {

template <typename Fn>
auto parsing(const char *section, Fn &&fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::Parse, std::string(section) + ": " + e.what());
  }
}

std::set<std::string> string_set(const Document &arr) {
  std::set<std::string> out;
  for (const auto &v : arr) out.insert(v.get<std::string>());
  return out;
}

Document node_json(const std::string &id, NodeRole role, int cores, double capacity,
                   double memory_gb, double baseline) {
  return {{"id", id},
          {"role", std::string(to_string(role))},
          {"cores", cores},
          {"capacity_per_core", capacity},
          {"memory_gb", memory_gb},
          {"baseline_load_fraction", baseline}};
}

Document link_json(const std::string &id, const std::string &a, const std::string &b,
                   double latency_ms, double mbps, double jitter_cv) {
  return {{"id", id},
          {"a", a},
          {"b", b},
          {"one_way_latency_ms", latency_ms},
          {"bandwidth_mbps", mbps},
          {"jitter_cv", jitter_cv}};
}

Document task_json(const std::string &id, TaskClass cls, double work, double memory_gb,
                   std::vector<std::string> publishes,
                   std::vector<std::string> subscribes) {
  return {{"id", id},
          {"class", std::string(to_string(cls))},
          {"work_per_request", work},
          {"memory_gb", memory_gb},
          {"publishes", publishes},
          {"subscribes", subscribes},
          {"pinned_to_robot", cls == TaskClass::Anchor}};
}

} // namespace

Document builtin_airport_scenario() {
  // Robot-alone face recognition takes 2354 ms on a 1.0 unit/s core.
  constexpr double kFaceWork = 2.354;

  Document topology = {
      {"nodes",
       {node_json("robot", NodeRole::Robot, 4, 1.0, 8.0, 0.12),
        node_json("edge", NodeRole::Edge, 26, 3.0, 256.0, 0.05),
        node_json("cloud", NodeRole::Cloud, 96, 5.0, 384.0, 0.0)}},
      {"links",
       {link_json("robot-edge", "robot", "edge", 0.815, 10000.0, 0.1),
        link_json("edge-cloud", "edge", "cloud", 18.185, 20.0, 0.1)}},
      {"slices",
       {{{"id", "netros"},
         {"nodes", {"cloud", "edge", "robot"}},
         {"links", {"edge-cloud", "robot-edge"}},
         {"bandwidth_share", 0.5},
         {"isolated", true}}}},
      {"background_traffic_mbps", Document::object()},
      {"loopback_one_way_ms", 0.008},
  };

  auto topic = [](const std::string &name, std::uint64_t bytes, double hz) {
    return Document{{"name", name}, {"message_size_bytes", bytes}, {"publish_rate_hz", hz}};
  };
  Document workload = {
      {"topics",
       {topic("camera/image", 2'000'000, 15.0), topic("lidar/scan", 40'000, 10.0),
        topic("teleop/probe", 64, 1.0), topic("teleop/echo", 64, 1.0),
        topic("nav/path", 1'000, 10.0), topic("face/detections", 20'000, 1.0),
        topic("face/identity", 1'000, 1.0), topic("hri/personal_message", 2'000, 1.0)}},
      {"tasks",
       {task_json("camera_driver", TaskClass::Anchor, 0.004, 0.12, {"camera/image"}, {}),
        task_json("lidar_driver", TaskClass::Anchor, 0.003, 0.05, {"lidar/scan"}, {}),
        task_json("display", TaskClass::Anchor, 0.002, 0.10, {},
                  {"hri/personal_message", "nav/path"}),
        task_json("teleop_echo", TaskClass::Anchor, 0.0005, 0.04, {"teleop/probe"},
                  {"teleop/echo"}),
        task_json("navigation", TaskClass::LatencyCritical, 0.045, 0.45,
                  {"nav/path", "teleop/echo"},
                  {"camera/image", "lidar/scan", "teleop/probe"}),
        task_json("face_detect", TaskClass::DataHeavy, kFaceWork, 0.35,
                  {"face/detections"}, {"camera/image"}),
        task_json("face_match", TaskClass::DataHeavy, kFaceWork, 0.38, {"face/identity"},
                  {"face/detections"}),
        task_json("personalization_responder", TaskClass::DataHeavy, 0.08, 0.13,
                  {"hri/personal_message"}, {"face/identity"})}},
      {"pipelines",
       {{{"id", "face_recognition"},
         {"stages",
          {{{"task", "face_detect"}, {"fraction", 0.3}},
           {{"task", "face_match"}, {"fraction", 0.7}}}},
         {"trigger_topic", "camera/image"},
         {"response_topic", "hri/personal_message"},
         {"payload_bytes", 200'000},
         {"stage_payload_bytes", 20'000},
         {"result_bytes", 2'000},
         {"display_overhead_ms", 20.0}}}},
  };

  return {{"name", "airport_guide"},
          {"slice", "netros"},
          {"hybrid_split", true},
          {"topology", topology},
          {"workload", workload}};
}

Topology build_topology(const Document &doc) {
  Topology t = parsing("topology", [&] {
    const auto &sec = doc.at("topology");
    Topology out;
    for (const auto &n : sec.at("nodes")) {
      out.nodes.push_back({n.at("id").get<std::string>(),
                           parse_node_role(n.at("role").get<std::string>()),
                           n.at("cores").get<int>(),
                           n.at("capacity_per_core").get<double>(),
                           n.at("memory_gb").get<double>(),
                           n.at("baseline_load_fraction").get<double>()});
    }
    for (const auto &l : sec.at("links")) {
      out.links.push_back({l.at("id").get<std::string>(), l.at("a").get<std::string>(),
                           l.at("b").get<std::string>(),
                           l.at("one_way_latency_ms").get<double>(),
                           l.at("bandwidth_mbps").get<double>(),
                           l.value("jitter_cv", 0.0)});
    }
    for (const auto &s : sec.value("slices", Document::array())) {
      out.slices.push_back({s.at("id").get<std::string>(), string_set(s.at("nodes")),
                            string_set(s.at("links")), s.at("bandwidth_share").get<double>(),
                            s.value("isolated", true)});
    }
    if (sec.contains("background_traffic_mbps")) {
      for (const auto &[k, v] : sec.at("background_traffic_mbps").items()) {
        out.background_traffic_mbps[k] = v.get<double>();
      }
    }
    out.loopback_one_way_ms = sec.value("loopback_one_way_ms", out.loopback_one_way_ms);
    return out;
  });
  validate_topology(t);
  return t;
}

Workload parse_workload(const Document &doc) {
  return parsing("workload", [&] {
    const auto &sec = doc.at("workload");
    Workload w;
    for (const auto &t : sec.value("topics", Document::array())) {
      w.topics.push_back({t.at("name").get<std::string>(),
                          t.at("message_size_bytes").get<std::uint64_t>(),
                          t.at("publish_rate_hz").get<double>()});
    }
    for (const auto &t : sec.value("tasks", Document::array())) {
      w.tasks.push_back({t.at("id").get<std::string>(),
                         parse_task_class(t.at("class").get<std::string>()),
                         t.at("work_per_request").get<double>(),
                         t.at("memory_gb").get<double>(),
                         string_set(t.value("publishes", Document::array())),
                         string_set(t.value("subscribes", Document::array())),
                         t.value("pinned_to_robot", false)});
    }
    for (const auto &p : sec.value("pipelines", Document::array())) {
      RequestPipeline pipe;
      pipe.id = p.at("id").get<std::string>();
      for (const auto &s : p.at("stages")) {
        pipe.stages.push_back({s.at("task").get<std::string>(), s.at("fraction").get<double>()});
      }
      pipe.trigger_topic = p.at("trigger_topic").get<std::string>();
      pipe.response_topic = p.at("response_topic").get<std::string>();
      pipe.payload_bytes = p.at("payload_bytes").get<std::uint64_t>();
      pipe.stage_payload_bytes = p.value("stage_payload_bytes", pipe.payload_bytes);
      pipe.result_bytes = p.value("result_bytes", std::uint64_t{1'000});
      pipe.display_overhead_ms = p.value("display_overhead_ms", 0.0);
      w.pipelines.push_back(std::move(pipe));
    }
    return w;
  });
}

Workload load_scenario(const Document &doc) {
  Workload w = parse_workload(doc);
  require_valid(w);
  return w;
}

Scenario load_scenario_document(const Document &doc) {
  Scenario s;
  s.topology = build_topology(doc);
  s.workload = load_scenario(doc);
  parsing("scenario", [&] {
    s.name = doc.value("name", std::string("scenario"));
    s.hybrid_split = doc.value("hybrid_split", true);
    if (doc.contains("slice")) {
      s.slice_id = doc.at("slice").get<std::string>();
    } else if (!s.topology.slices.empty()) {
      s.slice_id = s.topology.slices.front().id;
    }
    return 0;
  });
  if (s.slice_id.empty()) {
    throw Error(ErrorCode::UnknownSlice, "scenario declares no slice");
  }
  s.topology.slice(s.slice_id);
  return s;
}

Document to_json(const Topology &t) {
  Document nodes = Document::array();
  for (const auto &n : t.nodes) {
    nodes.push_back(node_json(n.id, n.role, n.cores, n.capacity_per_core, n.memory_gb,
                              n.baseline_load_fraction));
  }
  Document links = Document::array();
  for (const auto &l : t.links) {
    links.push_back(link_json(l.id, l.endpoint_a, l.endpoint_b, l.one_way_latency_ms,
                              l.bandwidth_mbps, l.jitter_cv));
  }
  Document slices = Document::array();
  for (const auto &s : t.slices) {
    slices.push_back({{"id", s.id},
                      {"nodes", s.member_nodes},
                      {"links", s.member_links},
                      {"bandwidth_share", s.bandwidth_share},
                      {"isolated", s.isolated}});
  }
  Document background = Document::object();
  for (const auto &[k, v] : t.background_traffic_mbps) background[k] = v;
  return {{"nodes", nodes},
          {"links", links},
          {"slices", slices},
          {"background_traffic_mbps", background},
          {"loopback_one_way_ms", t.loopback_one_way_ms}};
}

Document to_json(const Workload &w) {
  Document topics = Document::array();
  for (const auto &t : w.topics) {
    topics.push_back({{"name", t.name},
                      {"message_size_bytes", t.message_size_bytes},
                      {"publish_rate_hz", t.publish_rate_hz}});
  }
  Document tasks = Document::array();
  for (const auto &t : w.tasks) {
    Document j = task_json(t.id, t.task_class, t.work_per_request, t.memory_gb,
                           {t.publishes.begin(), t.publishes.end()},
                           {t.subscribes.begin(), t.subscribes.end()});
    j["pinned_to_robot"] = t.pinned_to_robot;
    tasks.push_back(std::move(j));
  }
  Document pipelines = Document::array();
  for (const auto &p : w.pipelines) {
    Document stages = Document::array();
    for (const auto &s : p.stages) stages.push_back({{"task", s.task}, {"fraction", s.fraction}});
    pipelines.push_back({{"id", p.id},
                         {"stages", stages},
                         {"trigger_topic", p.trigger_topic},
                         {"response_topic", p.response_topic},
                         {"payload_bytes", p.payload_bytes},
                         {"stage_payload_bytes", p.stage_payload_bytes},
                         {"result_bytes", p.result_bytes},
                         {"display_overhead_ms", p.display_overhead_ms}});
  }
  return {{"topics", topics}, {"tasks", tasks}, {"pipelines", pipelines}};
}

Document to_json(const Scenario &s) {
  return {{"name", s.name},
          {"slice", s.slice_id},
          {"hybrid_split", s.hybrid_split},
          {"topology", to_json(s.topology)},
          {"workload", to_json(s.workload)}};
}

Document read_json_file(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot read '" + path.string() + "'");
  try {
    return Document::parse(in);
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::Parse, path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write '" + path.string() + "'");
  out << text;
  out.flush();
  if (!out) throw Error(ErrorCode::IoFailure, "write failed for '" + path.string() + "'");
}

} // namespace netros
