#include "netros/kpi.hpp"

#include "netros/error.hpp"
#include "netros/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace netros::kpi {

namespace {

std::string fmt(const char *format, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, value);
  return buf;
}

std::string fixed3(double v) { return fmt("%.3f", v); }

std::string pad(std::string s, std::size_t width, bool right = false) {
  if (s.size() >= width) return s;
  std::string fill(width - s.size(), ' ');
  return right ? fill + s : s + fill;
}

// Table row order: the four deployments first, oracle last.
std::vector<Policy> ordered(const std::vector<Policy> &present) {
  std::vector<Policy> out;
  for (Policy p : {Policy::Local, Policy::EdgeOnly, Policy::CloudOnly, Policy::NetRosHybrid,
                   Policy::Oracle}) {
    if (std::find(present.begin(), present.end(), p) != present.end()) out.push_back(p);
  }
  return out;
}

template <typename Map> std::vector<Policy> keys_of(const Map &m) {
  std::vector<Policy> out;
  for (const auto &[k, v] : m) out.push_back(k);
  return out;
}

std::string render(const LatencyReport &latency, const LoadReport &load,
                   const ResponseReport &response) {
  std::ostringstream out;

  out << "End-to-end teleoperation latency (round trip, ms)\n";
  out << pad("policy", 10) << pad("n", 7, true) << pad("mean", 12, true)
      << pad("p50", 12, true) << pad("p95", 12, true) << pad("p99", 12, true) << "\n";
  auto lat_policies = ordered(keys_of(latency));
  for (Policy p : lat_policies) {
    const auto &s = latency.at(p);
    out << pad(std::string(to_string(p)), 10) << pad(std::to_string(s.n), 7, true)
        << pad(fixed3(s.mean), 12, true) << pad(fixed3(s.p50), 12, true)
        << pad(fixed3(s.p95), 12, true) << pad(fixed3(s.p99), 12, true) << "\n";
  }
  if (lat_policies.size() > 1) {
    out << "\nSymmetric percent difference of mean latency (%)\n";
    for (std::size_t i = 0; i < lat_policies.size(); ++i) {
      for (std::size_t j = i + 1; j < lat_policies.size(); ++j) {
        Policy a = lat_policies[j];
        Policy b = lat_policies[i];
        double ma = latency.at(a).mean;
        double mb = latency.at(b).mean;
        std::string value = (ma + mb) > 0.0 ? fixed3(symmetric_percent_difference(ma, mb)) : "n/a";
        out << "  spd(" << to_string(a) << ", " << to_string(b) << ") = " << value << "\n";
      }
    }
  }

  out << "\nRobot computational load\n";
  out << pad("policy", 10) << pad("cpu band (%)", 18, true) << pad("memory (GB)", 14, true)
      << "\n";
  for (Policy p : ordered(keys_of(load))) {
    const auto &r = load.at(p);
    std::string band = fmt("%.1f", r.cpu_low_pct) + " - " + fmt("%.1f", r.cpu_high_pct);
    out << pad(std::string(to_string(p)), 10) << pad(band, 18, true)
        << pad(fmt("%.2f", r.memory_gb), 14, true) << "\n";
  }

  out << "\nFace recognition response time (ms)\n";
  out << pad("policy", 10) << pad("recognition", 14, true) << pad("response", 14, true)
      << "\n";
  auto resp_policies = ordered(keys_of(response));
  for (Policy p : resp_policies) {
    const auto &r = response.at(p);
    out << pad(std::string(to_string(p)), 10) << pad(fmt("%.1f", r.recognition_ms), 14, true)
        << pad(fmt("%.1f", r.response_ms), 14, true) << "\n";
  }
  if (response.count(Policy::Local)) {
    const auto &local = response.at(Policy::Local);
    std::vector<std::string> lines;
    for (Policy p : resp_policies) {
      if (p == Policy::Local) continue;
      const auto &r = response.at(p);
      lines.push_back("  spd(local, " + std::string(to_string(p)) + "): recognition " +
                      fixed3(symmetric_percent_difference(local.recognition_ms,
                                                          r.recognition_ms)) +
                      ", response " +
                      fixed3(symmetric_percent_difference(local.response_ms, r.response_ms)));
    }
    if (!lines.empty()) {
      out << "\nSymmetric percent difference against local (%)\n";
      for (const auto &l : lines) out << l << "\n";
    }
  }
  return out.str();
}

} // namespace

double nearest_rank(const std::vector<double> &sorted, double q) {
  if (sorted.empty()) throw Error(ErrorCode::EmptySamples, "no samples");
  auto n = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil(q / 100.0 * n));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

Summary summarize(std::vector<double> samples) {
  if (samples.empty()) throw Error(ErrorCode::EmptySamples, "cannot summarize zero samples");
  std::sort(samples.begin(), samples.end());
  Summary s;
  s.n = samples.size();
  s.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(s.n);
  s.p50 = nearest_rank(samples, 50);
  s.p95 = nearest_rank(samples, 95);
  s.p99 = nearest_rank(samples, 99);
  s.min = samples.front();
  s.max = samples.back();
  // Rounding in the mean can push it a hair outside [min, max] for constant input.
  s.mean = std::clamp(s.mean, s.min, s.max);
  return s;
}

double symmetric_percent_difference(double a, double b) {
  if (a < 0.0 || b < 0.0 || std::isnan(a) || std::isnan(b)) {
    throw Error(ErrorCode::InvalidValue, "symmetric percent difference needs a, b >= 0");
  }
  if (a + b <= 0.0) throw Error(ErrorCode::BothZero, "both values are zero");
  return std::fabs(a - b) / ((a + b) / 2.0) * 100.0;
}

LoadRow robot_load(const sim::TraceLog &trace) {
  auto it = trace.utilization.find(trace.robot_node);
  if (it == trace.utilization.end() || it->second.empty()) {
    throw Error(ErrorCode::NoUtilizationSamples, "no utilization samples for the robot");
  }
  std::vector<double> values;
  values.reserve(it->second.size());
  for (const auto &s : it->second) values.push_back(s.fraction);
  std::sort(values.begin(), values.end());
  LoadRow row;
  row.cpu_low_pct = nearest_rank(values, 5) * 100.0;
  row.cpu_high_pct = nearest_rank(values, 95) * 100.0;
  auto mem = trace.resident_memory_gb.find(trace.robot_node);
  row.memory_gb = (mem == trace.resident_memory_gb.end() ? 0.0 : mem->second) + kRuntimeOverheadGb;
  return row;
}

ResponseRow response_times(const std::vector<sim::TransactionSample> &samples) {
  if (samples.empty()) throw Error(ErrorCode::EmptySamples, "no transactions recorded");
  ResponseRow row;
  for (const auto &s : samples) {
    row.recognition_ms += s.recognition_ms;
    row.response_ms += s.response_ms;
  }
  row.recognition_ms /= static_cast<double>(samples.size());
  row.response_ms /= static_cast<double>(samples.size());
  return row;
}

std::string to_csv(const LatencyReport &report) {
  std::string out = "policy,n,mean_ms,p50_ms,p95_ms,p99_ms,min_ms,max_ms\n";
  for (const auto &[p, s] : report) {
    out += std::string(to_string(p)) + "," + std::to_string(s.n);
    for (double v : {s.mean, s.p50, s.p95, s.p99, s.min, s.max}) out += "," + fixed3(v);
    out += "\n";
  }
  return out;
}

std::string to_csv(const LoadReport &report) {
  std::string out = "policy,cpu_low_pct,cpu_high_pct,memory_gb\n";
  for (const auto &[p, r] : report) {
    out += std::string(to_string(p)) + "," + fixed3(r.cpu_low_pct) + "," +
           fixed3(r.cpu_high_pct) + "," + fixed3(r.memory_gb) + "\n";
  }
  return out;
}

std::string to_csv(const ResponseReport &report) {
  std::string out = "policy,recognition_ms,response_ms\n";
  for (const auto &[p, r] : report) {
    out += std::string(to_string(p)) + "," + fixed3(r.recognition_ms) + "," +
           fixed3(r.response_ms) + "\n";
  }
  return out;
}

void export_csv(const LatencyReport &report, const std::filesystem::path &path) {
  write_text_file(path, to_csv(report));
}
void export_csv(const LoadReport &report, const std::filesystem::path &path) {
  write_text_file(path, to_csv(report));
}
void export_csv(const ResponseReport &report, const std::filesystem::path &path) {
  write_text_file(path, to_csv(report));
}

CsvTable parse_csv(const std::string &text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  auto split = [](const std::string &l) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(l);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    return cells;
  };
  if (!std::getline(in, line)) throw Error(ErrorCode::Parse, "empty CSV");
  table.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != table.header.size()) throw Error(ErrorCode::Parse, "ragged CSV row");
    table.keys.push_back(cells.front());
    std::vector<double> row;
    for (std::size_t i = 1; i < cells.size(); ++i) {
      try {
        row.push_back(std::stod(cells[i]));
      } catch (const std::exception &) {
        throw Error(ErrorCode::Parse, "non-numeric CSV cell '" + cells[i] + "'");
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string render_report(const LatencyReport &latency, const LoadReport &load,
                          const ResponseReport &response) {
  for (Policy p : {Policy::Local, Policy::EdgeOnly, Policy::CloudOnly, Policy::NetRosHybrid}) {
    if (!latency.count(p) || !load.count(p) || !response.count(p)) {
      throw Error(ErrorCode::MissingPolicy,
                  "report needs policy '" + std::string(to_string(p)) + "'");
    }
  }
  return render(latency, load, response);
}

std::string render_partial_report(const LatencyReport &latency, const LoadReport &load,
                                  const ResponseReport &response) {
  return render(latency, load, response);
}

} // namespace netros::kpi
