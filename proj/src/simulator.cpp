// Copyright 2026 The socsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "socsim/simulator.hpp"

#include "socsim/soc_policy.hpp"
#include "socsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace socsim {

const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::SessionArrival: return "SessionArrival";
    case EventKind::RequestDispatch: return "RequestDispatch";
    case EventKind::ServiceCompletion: return "ServiceCompletion";
    case EventKind::ThinkExpiry: return "ThinkExpiry";
    case EventKind::ClientTimeout: return "ClientTimeout";
    case EventKind::ControlTick: return "ControlTick";
    case EventKind::SlaTick: return "SlaTick";
    case EventKind::ProfileChange: return "ProfileChange";
    case EventKind::MetricSample: return "MetricSample";
  }
  return "Unknown";
}

void EventQueue::schedule(SimTime at, EventKind kind, std::uint64_t subject, std::uint64_t token) {
  if (at < now_ || std::isnan(at)) {
    throw InternalError(std::string("event ") + to_string(kind) + " scheduled at " +
                        std::to_string(at) + " before clock " + std::to_string(now_));
  }
  heap_.push(Event{at, next_sequence_++, kind, subject, token});
}

Event EventQueue::pop() {
  Event e = heap_.top();
  heap_.pop();
  now_ = e.fire_time;
  return e;
}

namespace {

/// Samples and counts gathered over one reporting interval.
struct IntervalAccumulator {
  SimTime start = 0.0;
  std::uint64_t arrivals = 0;
  std::uint64_t admitted = 0;
  std::uint64_t abandoned = 0;
  std::uint64_t rejected = 0;
  std::vector<std::vector<double>> rt;
  std::vector<std::vector<double>> rt_server;

  explicit IntervalAccumulator(std::size_t tiers) : rt(tiers), rt_server(tiers) {}

  void reset(SimTime at) {
    start = at;
    arrivals = admitted = abandoned = rejected = 0;
    for (auto& v : rt) v.clear();
    for (auto& v : rt_server) v.clear();
  }

  static std::vector<std::optional<double>> percentiles(std::vector<std::vector<double>>& per_tier) {
    std::vector<std::optional<double>> out;
    out.reserve(per_tier.size());
    for (auto& v : per_tier) out.push_back(percentile_nearest_rank(v, 0.95));
    return out;
  }
};

struct LiveSession {
  SessionRecord record;
  std::uint64_t request_token = 0;  // generation of the outstanding request
};

class Simulation {
 public:
  Simulation(const Scenario& sc, std::unique_ptr<AdmissionPolicy> policy, const RunOptions& opt)
      : sc_(sc),
        opt_(opt),
        streams_(sc.seed, sc.cluster.tier_count()),
        cluster_(sc.cluster),
        policy_(std::move(policy)),
        series_acc_(sc.cluster.tier_count()),
        sla_acc_(sc.cluster.tier_count()),
        warm_rt_(sc.cluster.tier_count()),
        warm_rt_server_(sc.cluster.tier_count()),
        warm_rt_sum_(sc.cluster.tier_count(), 0.0),
        warm_served_(sc.cluster.tier_count(), 0) {
    warmup_ = std::min(sc.effective_warmup(), sc.horizon);
    policy_->set_decision_sink([this](const DecisionEvent& e) {
      result_.decisions.push_back(e);
      if (opt_.sink) opt_.sink->on_decision(e);
    });
  }

  RunResult execute();

 private:
  void schedule(SimTime at, EventKind kind, std::uint64_t subject = 0, std::uint64_t token = 0) {
    queue_.schedule(at, kind, subject, token);
  }

  void sync_control_tick();
  void on_arrival(SimTime now);
  void dispatch_next(SimTime now, LiveSession& s);
  void on_completion(SimTime now, RequestId id);
  void on_timeout(SimTime now, std::uint64_t session, std::uint64_t token);
  void record_user_sample(SimTime now, TierIndex tier, double rt);
  void on_sla_tick(SimTime now, bool final_window);
  void on_sample(SimTime now);
  void finish();

  [[nodiscard]] bool measuring(SimTime now) const { return now >= warmup_; }

  const Scenario& sc_;
  RunOptions opt_;
  RngStreams streams_;
  Cluster cluster_;
  std::unique_ptr<AdmissionPolicy> policy_;
  EventQueue queue_;
  RunResult result_;

  std::unordered_map<std::uint64_t, LiveSession> sessions_;
  std::uint64_t next_session_id_ = 1;
  std::uint64_t tick_token_ = 0;
  std::optional<SimTime> scheduled_tick_;

  IntervalAccumulator series_acc_;
  IntervalAccumulator sla_acc_;

  double warmup_ = 0.0;
  std::vector<std::vector<double>> warm_rt_;
  std::vector<std::vector<double>> warm_rt_server_;
  std::vector<double> warm_rt_sum_;
  std::vector<std::uint64_t> warm_served_;
  double warm_p_sum_ = 0.0;
};

void Simulation::sync_control_tick() {
  const auto desired = policy_->next_tick();
  if (desired == scheduled_tick_) return;
  ++tick_token_;
  scheduled_tick_ = desired;
  if (desired) schedule(std::max(*desired, queue_.now()), EventKind::ControlTick, tick_token_);
}

void Simulation::on_arrival(SimTime now) {
  auto& c = result_.counters;
  const SessionId id{next_session_id_++};
  // The plan is drawn for every arrival so the traffic trace does not depend
  // on admission decisions.
  LiveSession live{build_session(streams_.session_plan, sc_.session, id, now), 0};
  ++c.arrivals;
  ++series_acc_.arrivals;
  ++sla_acc_.arrivals;
  if (opt_.record_arrivals) result_.arrival_times.push_back(now);

  const bool admit = policy_->on_arrival(now, streams_.admission);
  if (measuring(now)) {
    ++result_.summary.arrivals;
    warm_p_sum_ += policy_->current_p();
  }

  if (admit) {
    ++c.admitted;
    ++series_acc_.admitted;
    ++sla_acc_.admitted;
    if (measuring(now)) ++result_.summary.admitted;
    live.record.admitted = true;
    auto [it, inserted] = sessions_.emplace(id.value, std::move(live));
    if (!inserted) throw InternalError("duplicate session id");
    dispatch_next(now, it->second);
  } else {
    cluster_.reject_session(live.record, now);
    ++c.rejected;
    ++series_acc_.rejected;
    if (measuring(now)) ++result_.summary.rejected;
  }

  const SimTime next = next_arrival(now, sc_.profile, streams_.arrivals);
  if (std::isfinite(next)) schedule(next, EventKind::SessionArrival);
  sync_control_tick();
}

void Simulation::dispatch_next(SimTime now, LiveSession& s) {
  auto& rec = s.record;
  if (rec.remaining() == 0) throw InternalError("dispatch with an exhausted request plan");
  const TierIndex tier = rec.request_plan[rec.next_request];
  rec.state = SessionState::waiting;
  ++s.request_token;
  if (std::isfinite(sc_.session.client_timeout)) {
    schedule(now + sc_.session.client_timeout, EventKind::ClientTimeout, rec.id.value,
             s.request_token);
  }
  auto [rid, started] = cluster_.dispatch(rec.id, tier, now, streams_.service);
  if (started) schedule(started->completion, EventKind::ServiceCompletion, started->id.value);
}

void Simulation::on_completion(SimTime now, RequestId id) {
  auto done = cluster_.complete(id, now, streams_.service);
  if (done.next) schedule(done.next->completion, EventKind::ServiceCompletion, done.next->id.value);

  const auto& req = done.request;
  const std::size_t tier = req.tier.value;
  const double rt = *req.response_time;
  series_acc_.rt_server[tier].push_back(rt);
  if (measuring(now)) warm_rt_server_[tier].push_back(rt);

  auto it = sessions_.find(req.session_id.value);
  if (it == sessions_.end() || it->second.record.state != SessionState::waiting) {
    // The client gave up on this request; the work was done but nobody saw it.
    ++result_.counters.dropped_samples;
    return;
  }
  auto& live = it->second;
  record_user_sample(now, req.tier, rt);

  auto& rec = live.record;
  ++rec.next_request;
  if (rec.remaining() == 0) {
    rec.state = SessionState::completed;
    ++result_.counters.completed_sessions;
    if (measuring(now)) ++result_.summary.completed_sessions;
    sessions_.erase(it);
  } else {
    rec.state = SessionState::thinking;
    schedule(now + draw_think_time(streams_.think, sc_.session), EventKind::ThinkExpiry,
             rec.id.value);
  }
}

void Simulation::record_user_sample(SimTime now, TierIndex tier, double rt) {
  const std::size_t i = tier.value;
  series_acc_.rt[i].push_back(rt);
  sla_acc_.rt[i].push_back(rt);
  if (measuring(now)) {
    warm_rt_[i].push_back(rt);
    warm_rt_sum_[i] += rt;
    ++warm_served_[i];
  }
  policy_->on_response(now, tier, rt);
}

void Simulation::on_timeout(SimTime now, std::uint64_t session, std::uint64_t token) {
  auto it = sessions_.find(session);
  if (it == sessions_.end()) return;
  auto& live = it->second;
  if (live.record.state != SessionState::waiting || live.request_token != token) return;
  // The user saw no answer within the timeout; that wait is their response time.
  record_user_sample(now, live.record.request_plan[live.record.next_request],
                     sc_.session.client_timeout);
  live.record.state = SessionState::abandoned;
  ++result_.counters.abandoned_sessions;
  ++series_acc_.abandoned;
  if (measuring(now)) ++result_.summary.abandoned_sessions;
  sessions_.erase(it);
}

void Simulation::on_sla_tick(SimTime now, bool final_window) {
  WindowMetrics m;
  m.start = sla_acc_.start;
  m.end = now;
  m.rt95 = IntervalAccumulator::percentiles(sla_acc_.rt);
  m.arrivals = sla_acc_.arrivals;
  m.admitted = sla_acc_.admitted;
  if (m.end > m.start) {
    auto report = evaluate_sla(m, sc_.sla);
    if (opt_.sink) opt_.sink->on_compliance(report);
    result_.compliance.push_back(std::move(report));
  }
  sla_acc_.reset(now);
  if (!final_window) schedule(now + sc_.sla.check_interval, EventKind::SlaTick);
}

void Simulation::on_sample(SimTime now) {
  const double dt = now - series_acc_.start;
  SeriesRow row;
  row.time = now;
  if (dt > 0.0) {
    row.lambda_in = static_cast<double>(series_acc_.arrivals) / dt;
    row.lambda_adm = static_cast<double>(series_acc_.admitted) / dt;
    row.abandon_rate = static_cast<double>(series_acc_.abandoned) / dt;
    row.reject_rate = static_cast<double>(series_acc_.rejected) / dt;
  }
  const auto snap = policy_->snapshot();
  row.p = snap.p;
  row.lambda_star = snap.lambda_star;
  row.mode = snap.mode;
  row.rt95 = IntervalAccumulator::percentiles(series_acc_.rt);
  row.rt95_server = IntervalAccumulator::percentiles(series_acc_.rt_server);
  row.in_flight = sessions_.size();
  if (opt_.sink) opt_.sink->on_series(row);
  result_.series.push_back(std::move(row));
  series_acc_.reset(now);
  if (now + sc_.output.sample_interval <= sc_.horizon)
    schedule(now + sc_.output.sample_interval, EventKind::MetricSample);
}

RunResult Simulation::execute() {
  result_.policy = policy_->name();
  if (auto* soc = dynamic_cast<SocPolicy*>(policy_.get())) {
    for (const auto& c : soc->curves()) result_.bench_rt95.push_back(c.anchor().rt);
  }

  policy_->start(0.0);
  const SimTime first = next_arrival(0.0, sc_.profile, streams_.arrivals);
  if (std::isfinite(first)) schedule(first, EventKind::SessionArrival);
  for (std::size_t i = 1; i < sc_.profile.segments().size(); ++i) {
    schedule(sc_.profile.segments()[i].start, EventKind::ProfileChange, i);
  }
  schedule(sc_.sla.check_interval, EventKind::SlaTick);
  schedule(sc_.output.sample_interval, EventKind::MetricSample);
  sync_control_tick();

  while (!queue_.empty() && queue_.top().fire_time <= sc_.horizon) {
    const Event e = queue_.pop();
    ++result_.counters.events;
    if (opt_.record_trace) result_.trace.push_back({e.fire_time, e.kind});
    switch (e.kind) {
      case EventKind::SessionArrival:
        on_arrival(e.fire_time);
        break;
      case EventKind::RequestDispatch:
      case EventKind::ThinkExpiry: {
        auto it = sessions_.find(e.subject);
        if (it != sessions_.end() && it->second.record.state == SessionState::thinking)
          dispatch_next(e.fire_time, it->second);
        break;
      }
      case EventKind::ServiceCompletion:
        on_completion(e.fire_time, RequestId{static_cast<std::uint32_t>(e.subject)});
        break;
      case EventKind::ClientTimeout:
        on_timeout(e.fire_time, e.subject, e.token);
        break;
      case EventKind::ControlTick:
        if (e.subject == tick_token_) {
          scheduled_tick_.reset();
          policy_->on_tick(e.fire_time);
          sync_control_tick();
        }
        break;
      case EventKind::SlaTick:
        on_sla_tick(e.fire_time, false);
        break;
      case EventKind::ProfileChange:
        break;
      case EventKind::MetricSample:
        on_sample(e.fire_time);
        break;
    }
  }
  finish();
  return std::move(result_);
}

void Simulation::finish() {
  const SimTime end = sc_.horizon;
  cluster_.settle(end);
  if (sla_acc_.start < end) on_sla_tick(end, true);

  auto& c = result_.counters;
  c.end_time = end;
  c.in_flight_sessions = sessions_.size();
  for (std::size_t i = 0; i < cluster_.tier_count(); ++i)
    c.tiers.push_back(cluster_.tier(TierIndex{i}).counters());

  auto& s = result_.summary;
  const std::size_t k = sc_.cluster.tier_count();
  s.warmup = warmup_;
  s.measured_span = end - warmup_;
  if (s.measured_span > 0.0) {
    s.mean_lambda_in = static_cast<double>(s.arrivals) / s.measured_span;
    s.mean_lambda_adm = static_cast<double>(s.admitted) / s.measured_span;
    s.throughput = static_cast<double>(s.completed_sessions) / s.measured_span;
  }
  s.rejection_rate = s.arrivals ? static_cast<double>(s.rejected) / static_cast<double>(s.arrivals) : 0.0;
  s.mean_admission_probability = s.arrivals ? warm_p_sum_ / static_cast<double>(s.arrivals) : 1.0;

  std::size_t checks = 0, rt_failures = 0, adm_failures = 0;
  for (const auto& r : result_.compliance) {
    if (r.window_start < warmup_) continue;
    ++checks;
    if (!std::all_of(r.rt_ok.begin(), r.rt_ok.end(), [](bool b) { return b; })) ++rt_failures;
    if (!r.admission_ok) ++adm_failures;
  }
  if (checks) {
    s.sla_violation_fraction = static_cast<double>(rt_failures) / static_cast<double>(checks);
    s.admission_violation_fraction = static_cast<double>(adm_failures) / static_cast<double>(checks);
  }

  s.rt_mean.assign(k, 0.0);
  s.rt95.assign(k, std::nullopt);
  s.rt95_server.assign(k, std::nullopt);
  s.rt95_window_cv.assign(k, 0.0);
  s.request_throughput.assign(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    if (warm_served_[i]) s.rt_mean[i] = warm_rt_sum_[i] / static_cast<double>(warm_served_[i]);
    s.rt95[i] = percentile_nearest_rank(warm_rt_[i], 0.95);
    s.rt95_server[i] = percentile_nearest_rank(warm_rt_server_[i], 0.95);
    if (s.measured_span > 0.0)
      s.request_throughput[i] = static_cast<double>(warm_served_[i]) / s.measured_span;
    std::vector<double> window_values;
    for (const auto& row : result_.series) {
      if (row.time - sc_.output.sample_interval >= warmup_ && row.rt95[i])
        window_values.push_back(*row.rt95[i]);
    }
    s.rt95_window_cv[i] = coefficient_of_variation(window_values);
  }

  if (sc_.output.curve_dump) {
    if (auto* soc = dynamic_cast<SocPolicy*>(policy_.get())) {
      for (std::size_t i = 0; i < soc->curves().size(); ++i)
        result_.curves.push_back({end, i, soc->curves()[i].knots()});
    }
  }
}

}  // namespace

RunResult run_with_policy(const Scenario& scenario, std::unique_ptr<AdmissionPolicy> policy,
                          const RunOptions& options) {
  Scenario checked = scenario;
  checked.validate();
  Simulation sim(checked, std::move(policy), options);
  return sim.execute();
}

RunResult run(const Scenario& scenario, const RunOptions& options) {
  RngStreams streams(scenario.seed, scenario.cluster.tier_count());
  return run_with_policy(scenario, make_policy(scenario, streams.bench), options);
}

}  // namespace socsim
