#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "generators.hpp"
#include "netros/error.hpp"
#include "netros/scenario.hpp"
#include "netros/sim/simulator.hpp"
#include "netros/topology.hpp"

using namespace netros;

namespace {

Topology default_topology() { return build_topology(builtin_airport_scenario()); }

ErrorCode code_of(const std::function<void()> &f) {
  try {
    f();
  } catch (const Error &e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::Parse;
}

} // namespace

TEST_CASE("builtin topology has the three roles") {
  auto t = default_topology();
  CHECK(t.robot().id == "robot");
  REQUIRE(t.first_with_role(NodeRole::Edge));
  REQUIRE(t.first_with_role(NodeRole::Cloud));
  CHECK(t.robot().cores == 4);
  CHECK(t.robot().capacity_per_core == 1.0);
  CHECK(t.loopback_one_way_ms == doctest::Approx(0.008));
}

TEST_CASE("paths on the default line graph") {
  auto t = default_topology();
  CHECK(path_between(t, "robot", "cloud") == std::vector<std::string>{"robot-edge", "edge-cloud"});
  CHECK(path_between(t, "robot", "robot").empty());
  CHECK(path_between(t, "robot", "edge") == std::vector<std::string>{"robot-edge"});
  CHECK(path_between(t, "cloud", "robot") ==
        std::vector<std::string>{"edge-cloud", "robot-edge"});
}

TEST_CASE("missing path is reported") {
  auto t = default_topology();
  t.nodes.push_back({"island", NodeRole::Edge, 1, 1.0, 1.0, 0.0});
  CHECK(code_of([&] { path_between(t, "robot", "island"); }) == ErrorCode::NoPath);
  CHECK(code_of([&] { validate_topology(t); }) == ErrorCode::DisconnectedGraph);
}

TEST_CASE("effective bandwidth") {
  auto t = default_topology();
  CHECK(effective_bandwidth(t, "robot-edge", "netros") == doctest::Approx(5000.0));

  Topology open = t;
  open.slices[0].bandwidth_share = 1.0;
  open.slices[0].isolated = false;
  open.background_traffic_mbps["robot-edge"] = 400.0;
  CHECK(effective_bandwidth(open, "robot-edge", "netros") == doctest::Approx(9600.0));

  open.background_traffic_mbps["robot-edge"] = 1e9;
  CHECK(effective_bandwidth(open, "robot-edge", "netros") == doctest::Approx(0.1));

  Topology partial = t;
  partial.slices[0].member_links.erase("edge-cloud");
  CHECK(code_of([&] { effective_bandwidth(partial, "edge-cloud", "netros"); }) ==
        ErrorCode::NotInSlice);
  CHECK(code_of([&] { effective_bandwidth(t, "robot-edge", "nope"); }) ==
        ErrorCode::UnknownSlice);
}

TEST_CASE("slice validation") {
  auto t = default_topology();
  CHECK(validate_slice(t, "netros").empty());

  Topology missing = t;
  missing.slices[0].member_nodes.erase("cloud");
  auto v = validate_slice(missing, "netros");
  REQUIRE(v.size() == 1);
  CHECK(v[0].subject == "cloud");

  Topology zero = t;
  zero.slices[0].bandwidth_share = 0.0;
  CHECK(validate_slice(zero, "netros").size() == 1);
  CHECK(code_of([&] { validate_slice(t, "ghost"); }) == ErrorCode::UnknownSlice);
}

TEST_CASE("structural validation errors") {
  auto base = default_topology();

  Topology dup = base;
  dup.nodes.push_back(dup.nodes[1]);
  CHECK(code_of([&] { validate_topology(dup); }) == ErrorCode::DuplicateId);

  Topology dangling = base;
  dangling.links[0].endpoint_b = "mars";
  CHECK(code_of([&] { validate_topology(dangling); }) == ErrorCode::DanglingReference);

  Topology two_robots = base;
  two_robots.nodes[1].role = NodeRole::Robot;
  CHECK(code_of([&] { validate_topology(two_robots); }) == ErrorCode::InvalidValue);

  Topology negative = base;
  negative.links[0].one_way_latency_ms = -1.0;
  CHECK(code_of([&] { validate_topology(negative); }) == ErrorCode::InvalidValue);

  Topology loop = base;
  loop.links.push_back({"self", "edge", "edge", 1.0, 1.0, 0.0});
  CHECK(code_of([&] { validate_topology(loop); }) == ErrorCode::InvalidValue);
}

TEST_CASE("JSON round trip is stable") {
  auto t = default_topology();
  auto once = to_json(t);
  Document wrapped = {{"topology", once}};
  auto again = to_json(build_topology(wrapped));
  CHECK(once == again);
}

TEST_CASE("parse errors map to Parse") {
  Document bad = {{"topology", {{"nodes", "not a list"}}}};
  CHECK(code_of([&] { build_topology(bad); }) == ErrorCode::Parse);
}

TEST_CASE("property: reversed paths have equal latency, bandwidth never exceeds raw") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    testgen::TopologyOptions opt;
    opt.extra_edges = testgen::uniform_int(rng, 0, 2);
    opt.isolated = testgen::uniform_int(rng, 0, 1) == 1;
    auto t = testgen::random_topology(rng, opt);
    for (const auto &l : t.links) t.background_traffic_mbps[l.id] = testgen::uniform(rng, 0, 500);
    validate_topology(t);
    for (const auto &a : t.nodes) {
      for (const auto &b : t.nodes) {
        auto ab = path_between(t, a.id, b.id);
        auto ba = path_between(t, b.id, a.id);
        std::reverse(ba.begin(), ba.end());
        REQUIRE(ab == ba);
        REQUIRE(path_latency_ms(t, ab) ==
                doctest::Approx(path_latency_ms(t, path_between(t, b.id, a.id))).epsilon(1e-12));
      }
    }
    for (const auto &l : t.links) {
      REQUIRE(effective_bandwidth(t, l.id, "s") <= l.bandwidth_mbps);
    }
  }
}

TEST_CASE("property: isolated slices ignore background traffic") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 1000; ++i) {
    auto t = testgen::random_topology(rng);
    Topology loaded = t;
    for (const auto &l : t.links) loaded.background_traffic_mbps[l.id] = testgen::uniform(rng, 1, 1e4);
    for (const auto &l : t.links) {
      REQUIRE(effective_bandwidth(t, l.id, "s") == effective_bandwidth(loaded, l.id, "s"));
    }
  }
}

TEST_CASE("transit time examples") {
  auto t = default_topology();
  std::mt19937_64 rng(1);
  NetworkLink fixed = t.link("edge-cloud");
  fixed.one_way_latency_ms = 19.0;
  fixed.jitter_cv = 0.0;
  Topology t19 = t;
  t19.links[1] = fixed;
  CHECK(sim::transit_time(t19, fixed, "netros", 0, rng) == doctest::Approx(19.0));

  NetworkLink near = t.link("robot-edge");
  near.jitter_cv = 0.0;
  Topology t2 = t;
  t2.links[0] = near;
  CHECK(sim::transit_time(t2, near, "netros", 200'000, rng) ==
        doctest::Approx(0.815 + 0.32).epsilon(1e-12));
}
