#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace netros::sim {

enum class RecordKind {
  MessagePublished,
  MessageArrived,
  ServiceStarted,
  ServiceCompleted,
  ProbeSent,
  ProbeEchoed,
  SampleTick,
  /// Logged at the horizon for every message still travelling.
  InFlight,
};

std::string_view to_string(RecordKind kind);

struct TraceRecord {
  double timestamp_ms = 0.0;
  RecordKind kind = RecordKind::SampleTick;
  std::string task;
  std::string node;
  std::string link;
  std::uint64_t bytes = 0;
  /// Pairs a send with its arrival (or in-flight marker); 0 when unused.
  std::uint64_t message_id = 0;
};

struct UtilizationSample {
  double timestamp_ms = 0.0;
  double fraction = 0.0;
};

struct TransactionSample {
  std::string pipeline;
  double started_ms = 0.0;
  double recognition_ms = 0.0;
  double response_ms = 0.0;
};

/// Everything one simulation run produced.
struct TraceLog {
  std::vector<TraceRecord> records;
  std::map<std::string, std::vector<UtilizationSample>> utilization;
  /// Memory of the tasks resident on each node.
  std::map<std::string, double> resident_memory_gb;
  std::string robot_node;
  std::vector<double> probe_rtts_ms;
  std::vector<TransactionSample> transactions;
  double end_ms = 0.0;

  /// 64-bit FNV-1a checksum over the ordered record stream.
  std::uint64_t digest() const;
  /// `timestamp_ms,kind,task,node,link,bytes`, one line per record.
  std::string to_csv() const;
  std::size_t count(RecordKind kind) const;
};

struct ConservationReport {
  std::size_t published = 0;
  std::size_t arrived = 0;
  std::size_t in_flight = 0;
  std::size_t probes_sent = 0;
  std::size_t probes_echoed = 0;
  std::size_t probes_in_flight = 0;
  /// Every send has exactly one matching arrival or in-flight marker.
  bool holds = false;
};

/// Probe round trips draw ids from the upper half of the id space.
inline constexpr std::uint64_t kProbeIdBit = std::uint64_t{1} << 63;
inline bool is_probe_id(std::uint64_t id) { return (id & kProbeIdBit) != 0; }

ConservationReport check_conservation(const TraceLog &trace);

} // namespace netros::sim
