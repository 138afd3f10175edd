#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "netros/calibrate.hpp"
#include "netros/cli.hpp"
#include "netros/scenario.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace netros;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string &name) {
  auto dir = fs::temp_directory_path() / "netros_cli_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

} // namespace

TEST_CASE("calibrate with defaults") {
  auto dir = fresh_dir("calibrate");
  auto r = invoke({"calibrate", "--out", dir.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("residual") != std::string::npos);
  auto params = calibrate::load_params(dir / "fitted_params.json");
  CHECK(params.residual <= 0.15);
}

TEST_CASE("calibrate error paths") {
  auto dir = fresh_dir("calibrate_errors");
  CHECK(invoke({"calibrate", "--targets", (dir / "missing.json").string(), "--out", dir.string()})
            .code == 1);

  auto targets = calibrate::CalibrationTargets::defaults();
  targets.edge_vs_cloud_spd_pct = 250.0;
  write_text_file(dir / "t.json", calibrate::to_json(targets).dump());
  CHECK(invoke({"calibrate", "--targets", (dir / "t.json").string(), "--out", dir.string()})
            .code == 2);

  write_text_file(dir / "broken.json", "{ not json");
  CHECK(invoke({"calibrate", "--targets", (dir / "broken.json").string(), "--out", dir.string()})
            .code == 1);
}

TEST_CASE("calibrate honours --params as the output path") {
  auto dir = fresh_dir("calibrate_params");
  auto path = dir / "nested" / "p.json";
  CHECK(invoke({"calibrate", "--params", path.string()}).code == 0);
  CHECK(fs::exists(path));
}

TEST_CASE("compare writes three CSVs and a report") {
  auto dir = fresh_dir("compare");
  auto r = invoke({"compare", "--samples", "20", "--out", dir.string()});
  REQUIRE(r.code == 0);
  for (const char *f : {"latency.csv", "load.csv", "response.csv", "report.txt"}) {
    CHECK(fs::exists(dir / f));
  }
  CHECK(slurp(dir / "response.csv").find("hybrid") != std::string::npos);
  CHECK(r.out.find("spd(cloud, local)") != std::string::npos);
}

TEST_CASE("compare boundary and validation") {
  auto dir = fresh_dir("compare_edge_cases");
  CHECK(invoke({"compare", "--policies", "hybrid", "--samples", "1", "--out", dir.string()})
            .code == 0);
  auto r = invoke({"compare", "--policies", "flying", "--out", dir.string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("flying") != std::string::npos);
  CHECK(invoke({"compare", "--samples", "0", "--out", dir.string()}).code == 1);
  CHECK(invoke({"bogus"}).code == 1);
  CHECK(invoke({}).code == 1);
}

TEST_CASE("run is byte-deterministic") {
  auto a = fresh_dir("run_a");
  auto b = fresh_dir("run_b");
  CHECK(invoke({"run", "--policy", "hybrid", "--seed", "7", "--samples", "30", "--out",
                a.string()})
            .code == 0);
  CHECK(invoke({"run", "--policy", "hybrid", "--seed", "7", "--samples", "30", "--out",
                b.string()})
            .code == 0);
  CHECK(slurp(a / "trace.csv") == slurp(b / "trace.csv"));
  CHECK(slurp(a / "report.txt") == slurp(b / "report.txt"));
  CHECK(slurp(a / "trace.csv").rfind("timestamp_ms,kind,task,node,link,bytes\n", 0) == 0);
}

TEST_CASE("oracle run places like hybrid on the builtin scenario") {
  auto a = fresh_dir("run_oracle");
  auto b = fresh_dir("run_hybrid");
  REQUIRE(invoke({"run", "--policy", "oracle", "--samples", "2", "--out", a.string()}).code == 0);
  REQUIRE(invoke({"run", "--policy", "hybrid", "--samples", "2", "--out", b.string()}).code == 0);
  auto body = [](const std::string &report) {
    auto lines = report.substr(report.find('\n') + 1);
    return lines.substr(0, lines.find("\n\n"));
  };
  CHECK(body(slurp(a / "report.txt")) == body(slurp(b / "report.txt")));
}

TEST_CASE("invalid scenario lists violations") {
  auto dir = fresh_dir("run_invalid");
  auto doc = builtin_airport_scenario();
  doc["workload"]["pipelines"][0]["stages"][0]["task"] = "ghost";
  doc["workload"]["tasks"][4]["subscribes"].push_back("undeclared");
  write_text_file(dir / "bad.json", doc.dump());
  auto r = invoke({"run", "--policy", "hybrid", "--scenario", (dir / "bad.json").string(),
                   "--out", dir.string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("ghost") != std::string::npos);
  CHECK(r.err.find("undeclared") != std::string::npos);
}

TEST_CASE("infeasible placement exits 3") {
  auto dir = fresh_dir("run_infeasible");
  auto doc = builtin_airport_scenario();
  doc["topology"]["nodes"][0]["memory_gb"] = 0.5;
  write_text_file(dir / "small.json", doc.dump());
  auto r = invoke({"run", "--policy", "local", "--scenario", (dir / "small.json").string(),
                   "--out", dir.string()});
  CHECK(r.code == 3);
}

TEST_CASE("compare with fitted params") {
  auto dir = fresh_dir("compare_fitted");
  REQUIRE(invoke({"calibrate", "--out", dir.string()}).code == 0);
  auto r = invoke({"compare", "--params", (dir / "fitted_params.json").string(), "--samples",
                   "50", "--out", dir.string()});
  CHECK(r.code == 0);
  CHECK(invoke({"compare", "--params", (dir / "nope.json").string(), "--out", dir.string()})
            .code == 1);
}
