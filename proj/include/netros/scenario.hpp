#pragma once

#include "netros/topology.hpp"
#include "netros/workload.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>

namespace netros {

using Document = nlohmann::json;

/// A parsed scenario document: the infrastructure, the service graph and the
/// slice the workload runs in.
struct Scenario {
  std::string name;
  Topology topology;
  Workload workload;
  std::string slice_id;
  bool hybrid_split = true;
};

/// Airport guide robot with robot/edge/cloud nodes on one slice.
Document builtin_airport_scenario();

/// Builds and validates the `topology` section.
Topology build_topology(const Document &doc);
/// Builds and validates the `workload` section; throws the first violation.
Workload load_scenario(const Document &doc);
/// Builds the `workload` section without validating it.
Workload parse_workload(const Document &doc);
Scenario load_scenario_document(const Document &doc);

Document to_json(const Topology &t);
Document to_json(const Workload &w);
Document to_json(const Scenario &s);

Document read_json_file(const std::filesystem::path &path);
void write_text_file(const std::filesystem::path &path, const std::string &text);

} // namespace netros
