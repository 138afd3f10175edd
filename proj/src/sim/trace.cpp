#include "netros/sim/trace.hpp"

#include "netros/sim/rng.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <unordered_map>

namespace netros::sim {

std::string_view to_string(RecordKind kind) {
  switch (kind) {
  case RecordKind::MessagePublished: return "MessagePublished";
  case RecordKind::MessageArrived: return "MessageArrived";
  case RecordKind::ServiceStarted: return "ServiceStarted";
  case RecordKind::ServiceCompleted: return "ServiceCompleted";
  case RecordKind::ProbeSent: return "ProbeSent";
  case RecordKind::ProbeEchoed: return "ProbeEchoed";
  case RecordKind::SampleTick: return "SampleTick";
  case RecordKind::InFlight: return "InFlight";
  }
  return "?";
}

std::uint64_t TraceLog::digest() const {
  std::uint64_t h = fnv1a64("");
  auto mix = [&h](const void *data, std::size_t n) {
    h = fnv1a64(std::string_view(static_cast<const char *>(data), n), h);
  };
  for (const auto &r : records) {
    mix(&r.timestamp_ms, sizeof r.timestamp_ms);
    auto kind = static_cast<std::uint8_t>(r.kind);
    mix(&kind, 1);
    for (const auto *s : {&r.task, &r.node, &r.link}) {
      mix(s->data(), s->size());
      mix("\x1f", 1);
    }
    mix(&r.bytes, sizeof r.bytes);
    mix(&r.message_id, sizeof r.message_id);
  }
  return h;
}

std::string TraceLog::to_csv() const {
  std::string out = "timestamp_ms,kind,task,node,link,bytes\n";
  out.reserve(out.size() + records.size() * 64);
  char number[64];
  for (const auto &r : records) {
    std::snprintf(number, sizeof number, "%.6f", r.timestamp_ms);
    out += number;
    out += ',';
    out += to_string(r.kind);
    out += ',';
    out += r.task;
    out += ',';
    out += r.node;
    out += ',';
    out += r.link;
    out += ',';
    out += std::to_string(r.bytes);
    out += '\n';
  }
  return out;
}

std::size_t TraceLog::count(RecordKind kind) const {
  return static_cast<std::size_t>(std::count_if(
      records.begin(), records.end(), [kind](const TraceRecord &r) { return r.kind == kind; }));
}

ConservationReport check_conservation(const TraceLog &trace) {
  ConservationReport rep;
  // Per id: sends minus (arrivals + in-flight markers); must end at exactly zero
  // with one send each.
  std::unordered_map<std::uint64_t, int> sends;
  std::unordered_map<std::uint64_t, int> closes;
  bool ok = true;
  for (const auto &r : trace.records) {
    switch (r.kind) {
    case RecordKind::MessagePublished:
      ++rep.published;
      ++sends[r.message_id];
      break;
    case RecordKind::ProbeSent:
      ++rep.probes_sent;
      ++sends[r.message_id];
      break;
    case RecordKind::MessageArrived:
      ++rep.arrived;
      ++closes[r.message_id];
      break;
    case RecordKind::ProbeEchoed:
      ++rep.probes_echoed;
      ++closes[r.message_id];
      break;
    case RecordKind::InFlight:
      (is_probe_id(r.message_id) ? rep.probes_in_flight : rep.in_flight)++;
      ++closes[r.message_id];
      break;
    default: break;
    }
  }
  for (const auto &[id, n] : sends) {
    if (n != 1) ok = false;
    auto it = closes.find(id);
    if (it == closes.end() || it->second != 1) ok = false;
  }
  if (closes.size() != sends.size()) ok = false;
  rep.holds = ok && rep.published == rep.arrived + rep.in_flight &&
              rep.probes_sent == rep.probes_echoed + rep.probes_in_flight;
  return rep;
}

} // namespace netros::sim
