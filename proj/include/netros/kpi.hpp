#pragma once

#include "netros/placement.hpp"
#include "netros/sim/trace.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace netros::kpi {

struct Summary {
  std::size_t n = 0;
  double mean = 0.0;
  double p50 = 0.0;
  double p95 = 0.0;
  double p99 = 0.0;
  double min = 0.0;
  double max = 0.0;
};

/// Nearest-rank percentiles; throws EmptySamples.
Summary summarize(std::vector<double> samples);

/// Nearest-rank percentile of an already sorted sequence, q in [0, 100].
double nearest_rank(const std::vector<double> &sorted, double q);

/// |a - b| / ((a + b) / 2) * 100.
double symmetric_percent_difference(double a, double b);

struct LoadRow {
  double cpu_low_pct = 0.0;
  double cpu_high_pct = 0.0;
  double memory_gb = 0.0;
};

struct ResponseRow {
  double recognition_ms = 0.0;
  double response_ms = 0.0;
};

using LatencyReport = std::map<Policy, Summary>;
using LoadReport = std::map<Policy, LoadRow>;
using ResponseReport = std::map<Policy, ResponseRow>;

/// Resident memory on the robot that no placement can remove.
inline constexpr double kRuntimeOverheadGb = 0.2;

/// 5th/95th percentile of robot utilization plus resident memory.
LoadRow robot_load(const sim::TraceLog &trace);

/// Means over the recorded transactions; throws EmptySamples.
ResponseRow response_times(const std::vector<sim::TransactionSample> &samples);

std::string to_csv(const LatencyReport &report);
std::string to_csv(const LoadReport &report);
std::string to_csv(const ResponseReport &report);

void export_csv(const LatencyReport &report, const std::filesystem::path &path);
void export_csv(const LoadReport &report, const std::filesystem::path &path);
void export_csv(const ResponseReport &report, const std::filesystem::path &path);

/// Header row plus the numeric columns of each data row (first column kept as text).
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::string> keys;
  std::vector<std::vector<double>> rows;
};
CsvTable parse_csv(const std::string &text);

/// Full report; local, edge, cloud and hybrid must all be present (MissingPolicy).
std::string render_report(const LatencyReport &latency, const LoadReport &load,
                          const ResponseReport &response);

/// Same sections for whatever policies were run.
std::string render_partial_report(const LatencyReport &latency, const LoadReport &load,
                                  const ResponseReport &response);

} // namespace netros::kpi
