#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "generators.hpp"
#include "netros/error.hpp"
#include "netros/scenario.hpp"
#include "netros/workload.hpp"

using namespace netros;

namespace {

Workload builtin_workload() { return load_scenario(builtin_airport_scenario()); }

bool has_code(const std::vector<Violation> &v, ErrorCode code) {
  return std::any_of(v.begin(), v.end(), [code](const Violation &x) { return x.code == code; });
}

} // namespace

TEST_CASE("builtin workload lists the airport tasks") {
  auto w = builtin_workload();
  std::set<std::string> ids;
  for (const auto &t : w.tasks) ids.insert(t.id);
  CHECK(ids == std::set<std::string>{"camera_driver", "lidar_driver", "display", "teleop_echo",
                                     "navigation", "face_detect", "face_match",
                                     "personalization_responder"});
  CHECK(validate_workload(w).empty());
}

TEST_CASE("builtin face pipeline totals 2.354 unit-seconds") {
  auto w = builtin_workload();
  const auto *pipe = w.find_pipeline("face_recognition");
  REQUIRE(pipe);
  double work = 0.0;
  for (const auto &s : pipe->stages) work += w.task(s.task).work_per_request * s.fraction;
  CHECK(work == doctest::Approx(2.354).epsilon(1e-12));
  CHECK(pipe->payload_bytes == 200'000);
  CHECK(pipe->total_fraction() == doctest::Approx(1.0));
}

TEST_CASE("builtin classes and probe rate") {
  auto w = builtin_workload();
  CHECK(classify_task(w.task("navigation")) == TaskClass::LatencyCritical);
  CHECK(classify_task(w.task("face_match")) == TaskClass::DataHeavy);
  CHECK(w.task("teleop_echo").publishes.count("teleop/probe") == 1);
  CHECK(w.find_topic("teleop/probe")->publish_rate_hz == 1.0);
  for (const auto &t : w.tasks) {
    CHECK((t.task_class == TaskClass::Anchor) == t.pinned_to_robot);
  }
}

TEST_CASE("pinned task with a non-anchor class is inconsistent") {
  auto w = builtin_workload();
  ServiceTask camera = w.task("camera_driver");
  camera.task_class = TaskClass::DataHeavy;
  CHECK_THROWS_AS(classify_task(camera), Error);
  try {
    classify_task(camera);
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::InconsistentClass);
  }
}

TEST_CASE("orphan subscription") {
  auto doc = builtin_airport_scenario();
  doc["workload"]["topics"].push_back(
      {{"name", "nobody"}, {"message_size_bytes", 10}, {"publish_rate_hz", 1.0}});
  doc["workload"]["tasks"][4]["subscribes"].push_back("nobody");
  try {
    load_scenario(doc);
    FAIL("expected OrphanSubscription");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::OrphanSubscription);
  }
}

TEST_CASE("pipeline naming a ghost task") {
  auto doc = builtin_airport_scenario();
  doc["workload"]["pipelines"][0]["stages"][1]["task"] = "ghost";
  try {
    load_scenario(doc);
    FAIL("expected UnknownTaskInPipeline");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::UnknownTaskInPipeline);
  }
}

TEST_CASE("fractions that do not sum to one") {
  auto w = builtin_workload();
  w.pipelines[0].stages[0].fraction = 0.5;
  w.pipelines[0].stages[1].fraction = 0.4;
  auto v = validate_workload(w);
  CHECK(v.size() == 1);
  CHECK(v[0].code == ErrorCode::InvalidValue);
}

TEST_CASE("cyclic stage order") {
  auto w = builtin_workload();
  RequestPipeline back = w.pipelines[0];
  back.id = "backwards";
  std::swap(back.stages[0], back.stages[1]);
  w.pipelines.push_back(back);
  auto v = validate_workload(w);
  CHECK(v.size() == 1);
  CHECK(v[0].code == ErrorCode::CyclicPipeline);
}

TEST_CASE("publish and subscribe overlap") {
  auto w = builtin_workload();
  w.tasks[4].subscribes.insert("nav/path");
  CHECK(has_code(validate_workload(w), ErrorCode::InvalidValue));
}

TEST_CASE("duplicate ids and undeclared topics") {
  auto w = builtin_workload();
  w.tasks.push_back(w.tasks[0]);
  CHECK(has_code(validate_workload(w), ErrorCode::DuplicateId));

  auto w2 = builtin_workload();
  w2.tasks[5].publishes.insert("made/up");
  CHECK(has_code(validate_workload(w2), ErrorCode::DanglingReference));
}

TEST_CASE("workload JSON round trip is identity") {
  auto w = builtin_workload();
  Document doc = {{"workload", to_json(w)}};
  auto back = load_scenario(doc);
  CHECK(to_json(back) == to_json(w));
}

TEST_CASE("scenario document round trip") {
  auto s = testgen::builtin();
  auto again = load_scenario_document(to_json(s));
  CHECK(to_json(again) == to_json(s));
  CHECK(again.slice_id == "netros");
  CHECK(again.hybrid_split);
}

TEST_CASE("property: generated workloads validate and round-trip") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 1000; ++i) {
    auto w = testgen::random_workload(rng);
    auto v = validate_workload(w);
    REQUIRE_MESSAGE(v.empty(), (v.empty() ? "" : v.front().message));
    Document doc = {{"workload", to_json(w)}};
    REQUIRE(to_json(load_scenario(doc)) == to_json(w));
  }
}
