#include "netros/sim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>

namespace netros::sim {

namespace {

constexpr double kMinSampleWindowMs = 1e-6;

struct InFlightMessage {
  std::string task;
  std::string node;
  std::string link;
  std::uint64_t bytes = 0;
};

class Engine {
public:
  Engine(const Workload &w, const Topology &t, const Placement &p, std::string_view slice_id,
         const SimOptions &options)
      : w_(w), t_(t), p_(p), slice_(slice_id), opt_(options), rng_(options.seed),
        robot_(t.robot().id) {
    t_.slice(slice_);
    if (!(opt_.horizon_ms > 0.0)) throw std::invalid_argument("horizon must be positive");
    for (const auto &n : t_.nodes) {
      stations_.emplace(n.id, std::make_unique<ComputeStation>(n.cores, n.capacity_per_core,
                                                               opt_.discipline, queue_));
      last_busy_[n.id] = 0.0;
    }
    for (const auto &task : w_.tasks) {
      if (!w_.is_pipeline_stage(task.id) && task.work_per_request > 0.0) {
        stream_tasks_.insert(task.id);
      }
      trace_.resident_memory_gb[p_.node_of(task.id)] += task.memory_gb;
    }
    for (const auto &n : t_.nodes) trace_.resident_memory_gb.try_emplace(n.id, 0.0);
    trace_.robot_node = robot_;
  }

  TraceLog run() {
    schedule_sampling(1);
    if (opt_.periodic_traffic) schedule_periodic_traffic();
    start_probes();
    start_pipelines();

    if (opt_.stop_when_drivers_done && limited_drivers_ == 0) {
      throw std::invalid_argument("stop_when_drivers_done needs a limited driver");
    }
    if (std::isinf(opt_.horizon_ms) && !opt_.stop_when_drivers_done) {
      throw std::invalid_argument("an unbounded horizon needs stop_when_drivers_done");
    }

    while (!queue_.empty() && !stopped_) {
      if (queue_.next_time() > opt_.horizon_ms) break;
      Event e = queue_.pop();
      e.action();
    }
    trace_.end_ms = stopped_ ? queue_.now() : opt_.horizon_ms;
    // Runs shorter than one interval still get a single sample.
    if (last_sample_ms_ == 0.0 && trace_.end_ms > kMinSampleWindowMs) take_sample(trace_.end_ms);
    for (const auto &[id, m] : in_flight_) {
      record(trace_.end_ms, RecordKind::InFlight, m.task, m.node, m.link, m.bytes, id);
    }
    return std::move(trace_);
  }

private:
  void record(double at, RecordKind kind, const std::string &task, const std::string &node,
              const std::string &link, std::uint64_t bytes, std::uint64_t id = 0) {
    if (!opt_.record_events) return;
    trace_.records.push_back(TraceRecord{at, kind, task, node, link, bytes, id});
  }

  const std::vector<const NetworkLink *> &path(const std::string &from, const std::string &to) {
    auto key = std::make_pair(from, to);
    auto it = paths_.find(key);
    if (it == paths_.end()) {
      std::vector<const NetworkLink *> links;
      for (const auto &lid : path_between(t_, from, to)) links.push_back(&t_.link(lid));
      it = paths_.emplace(key, std::move(links)).first;
    }
    return it->second;
  }

  double transit(const std::string &from, const std::string &to, std::uint64_t bytes) {
    if (from == to) return t_.loopback_one_way_ms;
    double total = 0.0;
    for (const auto *link : path(from, to)) {
      total += transit_time(t_, *link, slice_, bytes, rng_.substream("link/" + link->id));
    }
    return total;
  }

  std::string first_link(const std::string &from, const std::string &to) {
    if (from == to) return {};
    return path(from, to).front()->id;
  }

  std::string last_link(const std::string &from, const std::string &to) {
    if (from == to) return {};
    return path(from, to).back()->id;
  }

  template <typename OnArrival>
  void send(const std::string &from_task, const std::string &from_node,
            const std::string &to_task, const std::string &to_node, std::uint64_t bytes,
            OnArrival on_arrival) {
    std::uint64_t id = ++next_message_;
    double now = queue_.now();
    std::string link = first_link(from_node, to_node);
    record(now, RecordKind::MessagePublished, from_task, from_node, link, bytes, id);
    in_flight_[id] = {from_task, from_node, link, bytes};
    double at = now + transit(from_node, to_node, bytes);
    queue_.schedule(at, EventKind::MessageArrived,
                    [this, id, to_task, to_node, from_node, bytes, on_arrival] {
                      in_flight_.erase(id);
                      record(queue_.now(), RecordKind::MessageArrived, to_task, to_node,
                             last_link(from_node, to_node), bytes, id);
                      on_arrival();
                    });
  }

  template <typename OnDone>
  void run_job(const std::string &task, const std::string &node, double work_units,
               OnDone on_done) {
    record(queue_.now(), RecordKind::ServiceStarted, task, node, {}, 0);
    double jitter = draw_lognormal(rng_.substream("work/" + node), 1.0, opt_.work_cv);
    stations_.at(node)->submit(work_units * jitter, [this, task, node, on_done] {
      record(queue_.now(), RecordKind::ServiceCompleted, task, node, {}, 0);
      on_done();
    });
  }

  void stream_work(const ServiceTask &task) {
    if (stream_tasks_.count(task.id)) {
      run_job(task.id, p_.node_of(task.id), task.work_per_request, [] {});
    }
  }

  // Periodic publishers ------------------------------------------------------

  void schedule_periodic_traffic() {
    for (const auto &topic : w_.topics) {
      double period = 1000.0 / topic.publish_rate_hz;
      for (const auto *pub : w_.publishers_of(topic.name)) {
        // Deterministic phase so publishers do not all fire at t = 0.
        double phase =
            static_cast<double>(fnv1a64(topic.name + "|" + pub->id) % 1000) / 1000.0 * period;
        schedule_publication(&topic, pub, phase, period);
      }
    }
  }

  void schedule_publication(const Topic *topic, const ServiceTask *pub, double at,
                            double period) {
    if (at > opt_.horizon_ms) return;
    queue_.schedule(at, EventKind::MessagePublished, [this, topic, pub, at, period] {
      if (pub->subscribes.empty()) stream_work(*pub);
      const std::string &from = p_.node_of(pub->id);
      for (const auto *sub : w_.subscribers_of(topic->name)) {
        send(pub->id, from, sub->id, p_.node_of(sub->id), topic->message_size_bytes,
             [this, sub] { stream_work(*sub); });
      }
      schedule_publication(topic, pub, at + period, period);
    });
  }

  // Teleoperation probes ------------------------------------------------------

  void start_probes() {
    if (opt_.probe_rate_hz <= 0.0 || !w_.find_task(opt_.probe_task)) return;
    if (opt_.probe_limit > 0) {
      ++limited_drivers_;
      probes_pending_ = true;
    }
    schedule_probe(0);
  }

  void schedule_probe(std::size_t k) {
    if (opt_.probe_limit > 0 && k >= opt_.probe_limit) return;
    double at = static_cast<double>(k) * 1000.0 / opt_.probe_rate_hz;
    if (at > opt_.horizon_ms) return;
    queue_.schedule(at, EventKind::ProbeSent, [this, k] {
      const std::string host = p_.node_of(opt_.probe_task);
      std::uint64_t id = kProbeIdBit | ++next_probe_;
      double sent = queue_.now();
      std::string link = first_link(robot_, host);
      record(sent, RecordKind::ProbeSent, opt_.probe_task, robot_, link, opt_.probe_bytes, id);
      in_flight_[id] = {opt_.probe_task, robot_, link, opt_.probe_bytes};
      double there = sent + transit(robot_, host, opt_.probe_bytes);
      queue_.schedule(there, EventKind::MessageArrived, [this, id, host, sent] {
        double back = queue_.now() + transit(host, robot_, opt_.probe_bytes);
        queue_.schedule(back, EventKind::ProbeEchoed, [this, id, host, sent] {
          in_flight_.erase(id);
          record(queue_.now(), RecordKind::ProbeEchoed, opt_.probe_task, robot_,
                 last_link(host, robot_), opt_.probe_bytes, id);
          trace_.probe_rtts_ms.push_back(queue_.now() - sent);
          if (probes_pending_ && trace_.probe_rtts_ms.size() >= opt_.probe_limit) {
            probes_pending_ = false;
            driver_finished();
          }
        });
      });
      schedule_probe(k + 1);
    });
  }

  // Closed-loop pipeline requests ---------------------------------------------

  struct Request {
    const RequestPipeline *pipeline = nullptr;
    double started = 0.0;
    double first_arrival = 0.0;
    double last_done = 0.0;
    std::string host;
  };

  void start_pipelines() {
    if (!opt_.run_pipelines) return;
    for (const auto &pipe : w_.pipelines) {
      if (!opt_.pipeline_id.empty() && pipe.id != opt_.pipeline_id) continue;
      if (pipe.stages.empty()) continue;
      if (opt_.transaction_limit > 0) {
        ++limited_drivers_;
        ++pipelines_pending_;
      }
      completed_[pipe.id] = 0;
      const RequestPipeline *pp = &pipe;
      queue_.schedule(0.0, EventKind::MessagePublished, [this, pp] { issue(pp); });
    }
  }

  void issue(const RequestPipeline *pipe) {
    auto req = std::make_shared<Request>();
    req->pipeline = pipe;
    req->started = queue_.now();
    req->host = robot_;
    advance_stage(req, 0);
  }

  void advance_stage(const std::shared_ptr<Request> &req, std::size_t i) {
    const auto &pipe = *req->pipeline;
    const auto &stage = pipe.stages[i];
    const std::string host = p_.node_of(stage.task);
    std::string from_task;
    if (i > 0) {
      from_task = pipe.stages[i - 1].task;
    } else {
      auto pubs = w_.publishers_of(pipe.trigger_topic);
      from_task = pubs.empty() ? pipe.id : pubs.front()->id;
    }
    std::uint64_t bytes = i == 0 ? pipe.payload_bytes : pipe.stage_payload_bytes;
    send(from_task, req->host, stage.task, host, bytes, [this, req, i, host] {
      const auto &pipe = *req->pipeline;
      const auto &stage = pipe.stages[i];
      if (i == 0) req->first_arrival = queue_.now();
      double work = w_.task(stage.task).work_per_request * stage.fraction;
      run_job(stage.task, host, work, [this, req, i, host] {
        req->host = host;
        req->last_done = queue_.now();
        if (i + 1 < req->pipeline->stages.size()) {
          advance_stage(req, i + 1);
        } else {
          deliver_result(req);
        }
      });
    });
  }

  void deliver_result(const std::shared_ptr<Request> &req) {
    const auto &pipe = *req->pipeline;
    std::string display;
    for (const auto *sub : w_.subscribers_of(pipe.response_topic)) {
      if (p_.node_of(sub->id) == robot_) {
        display = sub->id;
        break;
      }
    }
    send(pipe.stages.back().task, req->host, display, robot_, pipe.result_bytes, [this, req] {
      double shown = queue_.now() + req->pipeline->display_overhead_ms;
      queue_.schedule(shown, EventKind::ServiceCompleted, [this, req] { finish(req); });
    });
  }

  void finish(const std::shared_ptr<Request> &req) {
    const auto &pipe = *req->pipeline;
    double now = queue_.now();
    trace_.transactions.push_back(
        {pipe.id, req->started, req->last_done - req->first_arrival, now - req->started});
    std::size_t done = ++completed_[pipe.id];
    if (opt_.transaction_limit > 0 && done >= opt_.transaction_limit) {
      if (pipelines_pending_ > 0 && --pipelines_pending_ == 0) driver_finished();
      return;
    }
    if (now <= opt_.horizon_ms) issue(req->pipeline);
  }

  // Utilization sampling -------------------------------------------------------

  void schedule_sampling(std::size_t k) {
    double at = static_cast<double>(k) * opt_.sample_interval_ms;
    if (at > opt_.horizon_ms) return;
    queue_.schedule(at, EventKind::SampleTick, [this, k] {
      take_sample(queue_.now());
      schedule_sampling(k + 1);
    });
  }

  void take_sample(double now) {
    double interval = now - last_sample_ms_;
    for (const auto &n : t_.nodes) {
      double busy = stations_.at(n.id)->busy_core_ms(now);
      double window = interval * n.cores;
      double fraction =
          std::min(1.0, n.baseline_load_fraction + (busy - last_busy_[n.id]) / window);
      last_busy_[n.id] = busy;
      trace_.utilization[n.id].push_back({now, fraction});
      record(now, RecordKind::SampleTick, {}, n.id, {}, 0);
    }
    last_sample_ms_ = now;
  }

  void driver_finished() {
    if (--limited_drivers_ == 0 && opt_.stop_when_drivers_done) stopped_ = true;
  }

  const Workload &w_;
  const Topology &t_;
  const Placement &p_;
  std::string slice_;
  SimOptions opt_;
  RngStream rng_;
  std::string robot_;

  EventQueue queue_;
  std::map<std::string, std::unique_ptr<ComputeStation>> stations_;
  std::map<std::pair<std::string, std::string>, std::vector<const NetworkLink *>> paths_;
  std::map<std::string, double> last_busy_;
  double last_sample_ms_ = 0.0;
  std::set<std::string> stream_tasks_;
  std::map<std::uint64_t, InFlightMessage> in_flight_;
  std::map<std::string, std::size_t> completed_;
  std::uint64_t next_message_ = 0;
  std::uint64_t next_probe_ = 0;
  int limited_drivers_ = 0;
  int pipelines_pending_ = 0;
  bool probes_pending_ = false;
  bool stopped_ = false;
  TraceLog trace_;
};

} // namespace

double transit_time(const Topology &t, const NetworkLink &link, std::string_view slice_id,
                    std::uint64_t payload_bytes, std::mt19937_64 &rng) {
  double bandwidth = effective_bandwidth(t, link.id, slice_id);
  double latency = draw_lognormal(rng, link.one_way_latency_ms, link.jitter_cv);
  return latency + serialization_ms(payload_bytes, bandwidth);
}

double service_time(const ServiceTask &task, double stage_fraction, const ComputeNode &node,
                    std::size_t concurrent) {
  double share = std::min(1.0, static_cast<double>(node.cores) /
                                   static_cast<double>(std::max<std::size_t>(1, concurrent)));
  return task.work_per_request * stage_fraction / (node.capacity_per_core * share) * 1000.0;
}

TraceLog simulate(const Workload &w, const Topology &t, const Placement &p,
                  std::string_view slice_id, const SimOptions &options) {
  return Engine(w, t, p, slice_id, options).run();
}

TraceLog run_simulation(const Workload &w, const Topology &t, const Placement &p,
                        std::string_view slice_id, double duration_ms, std::uint64_t seed) {
  SimOptions opt;
  opt.horizon_ms = duration_ms;
  opt.seed = seed;
  return simulate(w, t, p, slice_id, opt);
}

std::vector<double> teleop_probe(const Workload &w, const Topology &t, const Placement &p,
                                 std::string_view slice_id, std::size_t n_samples,
                                 double rate_hz, std::uint64_t seed) {
  if (n_samples == 0) throw std::invalid_argument("n_samples must be positive");
  SimOptions opt;
  opt.seed = seed;
  opt.horizon_ms = std::numeric_limits<double>::infinity();
  opt.stop_when_drivers_done = true;
  opt.periodic_traffic = false;
  opt.run_pipelines = false;
  opt.record_events = false;
  opt.probe_rate_hz = rate_hz;
  opt.probe_limit = n_samples;
  p.node_of(opt.probe_task);
  return simulate(w, t, p, slice_id, opt).probe_rtts_ms;
}

std::vector<TransactionSample> face_recognition_transaction(
    const Workload &w, const Topology &t, const Placement &p, std::string_view slice_id,
    std::size_t n_requests, std::uint64_t seed, const std::string &pipeline_id) {
  if (n_requests == 0) throw std::invalid_argument("n_requests must be positive");
  if (w.pipelines.empty()) throw std::invalid_argument("workload has no pipeline");
  SimOptions opt;
  opt.seed = seed;
  opt.horizon_ms = std::numeric_limits<double>::infinity();
  opt.stop_when_drivers_done = true;
  opt.record_events = false;
  opt.probe_rate_hz = 0.0;
  opt.pipeline_id = pipeline_id.empty() ? w.pipelines.front().id : pipeline_id;
  opt.transaction_limit = n_requests;
  return simulate(w, t, p, slice_id, opt).transactions;
}

} // namespace netros::sim
