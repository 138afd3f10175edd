#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "generators.hpp"
#include "netros/error.hpp"
#include "netros/kpi.hpp"
#include "netros/sim/simulator.hpp"

#include <filesystem>
#include <fstream>

using namespace netros;
using namespace netros::kpi;

namespace {

std::filesystem::path scratch(const std::string &name) {
  auto dir = std::filesystem::temp_directory_path() / "netros_kpi_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string slurp(const std::filesystem::path &p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

ResponseReport four_rows() {
  return {{Policy::Local, {2354, 2383}},
          {Policy::EdgeOnly, {596, 615}},
          {Policy::CloudOnly, {587, 684}},
          {Policy::NetRosHybrid, {657, 698}}};
}

LatencyReport four_latencies() {
  LatencyReport r;
  r[Policy::Local] = summarize({0.016, 0.016});
  r[Policy::EdgeOnly] = summarize({1.631});
  r[Policy::CloudOnly] = summarize({38.0});
  r[Policy::NetRosHybrid] = summarize({1.631});
  return r;
}

LoadReport four_loads() {
  return {{Policy::Local, {65, 80, 1.82}},
          {Policy::EdgeOnly, {28, 35, 0.95}},
          {Policy::CloudOnly, {12, 17, 0.51}},
          {Policy::NetRosHybrid, {12, 18, 0.51}}};
}

} // namespace

TEST_CASE("summarize hand examples") {
  auto s = summarize({1, 2, 3, 4, 5});
  CHECK(s.n == 5);
  CHECK(s.mean == 3);
  CHECK(s.p50 == 3);
  CHECK(s.min == 1);
  CHECK(s.max == 5);
  CHECK(s.p95 == 5);

  auto one = summarize({7});
  for (double v : {one.mean, one.p50, one.p95, one.p99, one.min, one.max}) CHECK(v == 7);
  CHECK_THROWS_AS(summarize({}), Error);
}

TEST_CASE("nearest rank on a hundred values") {
  std::vector<double> v(100);
  for (int i = 0; i < 100; ++i) v[i] = i + 1;
  auto s = summarize(v);
  CHECK(s.p50 == 50);
  CHECK(s.p95 == 95);
  CHECK(s.p99 == 99);
}

TEST_CASE("symmetric percent difference examples") {
  CHECK(symmetric_percent_difference(38, 0.016) == doctest::Approx(199.832).epsilon(5e-6));
  CHECK(std::fabs(symmetric_percent_difference(38, 0.016) - 199.832) < 0.001);
  CHECK(std::fabs(symmetric_percent_difference(2383, 684) - 110.792) < 0.001);
  CHECK(symmetric_percent_difference(4.5, 4.5) == 0.0);
  try {
    symmetric_percent_difference(0, 0);
    FAIL("expected BothZero");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::BothZero);
  }
}

TEST_CASE("property: spd symmetric, bounded, monotone") {
  std::mt19937_64 rng(51);
  for (int i = 0; i < 1000; ++i) {
    double a = testgen::log_uniform(rng, 1e-3, 1e4);
    double b = testgen::log_uniform(rng, 1e-3, 1e4);
    double s = symmetric_percent_difference(a, b);
    REQUIRE(s == symmetric_percent_difference(b, a));
    REQUIRE(s >= 0.0);
    REQUIRE(s < 200.0);
    REQUIRE(symmetric_percent_difference(a, a) == 0.0);
    // Fixed sum, wider gap => larger value.
    double total = a + b;
    double gap1 = testgen::uniform(rng, 0.0, total * 0.99);
    double gap2 = testgen::uniform(rng, 0.0, total * 0.99);
    if (gap1 > gap2) std::swap(gap1, gap2);
    if (gap2 - gap1 < 1e-9 * total) continue;
    double s1 = symmetric_percent_difference((total + gap1) / 2, (total - gap1) / 2);
    double s2 = symmetric_percent_difference((total + gap2) / 2, (total - gap2) / 2);
    REQUIRE(s1 < s2);
  }
}

TEST_CASE("property: percentiles are ordered") {
  std::mt19937_64 rng(52);
  for (int i = 0; i < 1000; ++i) {
    int n = testgen::uniform_int(rng, 1, 500);
    std::vector<double> v(n);
    for (auto &x : v) x = testgen::uniform(rng, -1e3, 1e3);
    auto s = summarize(v);
    REQUIRE(s.n == static_cast<std::size_t>(n));
    REQUIRE(s.min <= s.p50);
    REQUIRE(s.p50 <= s.p95);
    REQUIRE(s.p95 <= s.p99);
    REQUIRE(s.p99 <= s.max);
    REQUIRE(s.mean >= s.min);
    REQUIRE(s.mean <= s.max);
  }
}

TEST_CASE("robot load of a baseline-only run") {
  auto s = testgen::builtin();
  Workload empty;
  Placement p;
  auto trace = sim::run_simulation(empty, s.topology, p, s.slice_id, 10'000, 1);
  auto row = robot_load(trace);
  CHECK(row.cpu_low_pct == doctest::Approx(12.0));
  CHECK(row.cpu_high_pct == doctest::Approx(12.0));
  CHECK(row.memory_gb == doctest::Approx(kRuntimeOverheadGb));

  sim::TraceLog blank;
  blank.robot_node = "robot";
  CHECK_THROWS_AS(robot_load(blank), Error);
}

TEST_CASE("robot memory sums robot-resident tasks") {
  auto s = testgen::builtin();
  auto p = place(Policy::Local, s.workload, s.topology, s.slice_id);
  auto trace = sim::run_simulation(s.workload, s.topology, p, s.slice_id, 3'000, 1);
  CHECK(robot_load(trace).memory_gb == doctest::Approx(1.82));
}

TEST_CASE("response CSV shape and determinism") {
  auto path = scratch("response.csv");
  export_csv(four_rows(), path);
  auto text = slurp(path);
  CHECK(std::count(text.begin(), text.end(), '\n') == 5);
  CHECK(text.rfind("policy,recognition_ms,response_ms\n", 0) == 0);
  export_csv(four_rows(), path);
  CHECK(slurp(path) == text);
}

TEST_CASE("CSV headers") {
  CHECK(to_csv(four_latencies()).rfind("policy,n,mean_ms,p50_ms,p95_ms,p99_ms,min_ms,max_ms\n", 0) == 0);
  CHECK(to_csv(four_loads()).rfind("policy,cpu_low_pct,cpu_high_pct,memory_gb\n", 0) == 0);
}

TEST_CASE("unwritable path raises IoFailure") {
  try {
    export_csv(four_rows(), "/nonexistent_dir_for_netros/x.csv");
    FAIL("expected IoFailure");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::IoFailure);
  }
}

TEST_CASE("property: CSV round trip to three decimals") {
  std::mt19937_64 rng(53);
  for (int i = 0; i < 1000; ++i) {
    LoadReport load;
    for (Policy p : kAllPolicies) {
      if (testgen::uniform_int(rng, 0, 1)) continue;
      double lo = testgen::uniform(rng, 0, 100);
      load[p] = {lo, lo + testgen::uniform(rng, 0, 10), testgen::uniform(rng, 0, 4)};
    }
    auto table = parse_csv(to_csv(load));
    REQUIRE(table.rows.size() == load.size());
    std::size_t k = 0;
    for (const auto &[p, row] : load) {
      REQUIRE(table.keys[k] == to_string(p));
      REQUIRE(std::fabs(table.rows[k][0] - row.cpu_low_pct) <= 0.0005 + 1e-12);
      REQUIRE(std::fabs(table.rows[k][1] - row.cpu_high_pct) <= 0.0005 + 1e-12);
      REQUIRE(std::fabs(table.rows[k][2] - row.memory_gb) <= 0.0005 + 1e-12);
      ++k;
    }
  }
}

TEST_CASE("report needs the four deployments") {
  auto text = render_report(four_latencies(), four_loads(), four_rows());
  CHECK(text.find("spd(cloud, local) = 199.832") != std::string::npos);
  CHECK(text.find("response 110.792") != std::string::npos);
  CHECK(text == render_report(four_latencies(), four_loads(), four_rows()));

  auto count_rows = [&](const std::string &header) {
    auto start = text.find(header);
    REQUIRE(start != std::string::npos);
    auto body = text.substr(start);
    body = body.substr(0, body.find("\n\n"));
    return std::count(body.begin(), body.end(), '\n') - 1;
  };
  CHECK(count_rows("Robot computational load") == 4);
  CHECK(count_rows("Face recognition response time") == 4);

  auto no_local = four_rows();
  no_local.erase(Policy::Local);
  try {
    render_report(four_latencies(), four_loads(), no_local);
    FAIL("expected MissingPolicy");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::MissingPolicy);
  }
}

TEST_CASE("partial report renders any subset") {
  LatencyReport lat{{Policy::NetRosHybrid, summarize({1.6})}};
  LoadReport load{{Policy::NetRosHybrid, {14, 15, 0.51}}};
  ResponseReport resp{{Policy::NetRosHybrid, {660, 700}}};
  auto text = render_partial_report(lat, load, resp);
  CHECK(text.find("hybrid") != std::string::npos);
  CHECK(text.find("spd(") == std::string::npos);
}
