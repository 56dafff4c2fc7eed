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

#pragma once

#include "socsim/cluster.hpp"
#include "socsim/policy.hpp"
#include "socsim/regressogram.hpp"
#include "socsim/rng.hpp"
#include "socsim/scenario.hpp"
#include "socsim/sla.hpp"
#include "socsim/types.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <queue>
#include <string>
#include <unordered_map>
#include <vector>

namespace socsim {

enum class EventKind : std::uint8_t {
  SessionArrival,
  RequestDispatch,
  ServiceCompletion,
  ThinkExpiry,
  ClientTimeout,
  ControlTick,
  SlaTick,
  ProfileChange,
  MetricSample,
};

const char* to_string(EventKind k);

struct Event {
  SimTime fire_time = 0.0;
  std::uint64_t sequence = 0;
  EventKind kind = EventKind::SessionArrival;
  std::uint64_t subject = 0;  // session id, request id or tick token
  std::uint64_t token = 0;    // request generation for timeouts

  /// Min-heap order on (fire_time, sequence).
  friend bool operator>(const Event& a, const Event& b) {
    if (a.fire_time != b.fire_time) return a.fire_time > b.fire_time;
    return a.sequence > b.sequence;
  }
};

/// Event heap with a monotone clock. Ties resolve in insertion order.
class EventQueue {
 public:
  void schedule(SimTime at, EventKind kind, std::uint64_t subject = 0, std::uint64_t token = 0);
  [[nodiscard]] bool empty() const { return heap_.empty(); }
  [[nodiscard]] const Event& top() const { return heap_.top(); }
  Event pop();
  [[nodiscard]] SimTime now() const { return now_; }
  [[nodiscard]] std::size_t size() const { return heap_.size(); }

 private:
  std::priority_queue<Event, std::vector<Event>, std::greater<>> heap_;
  std::uint64_t next_sequence_ = 0;
  SimTime now_ = 0.0;
};

/// One row of the time series, covering (time - interval, time].
struct SeriesRow {
  SimTime time = 0.0;
  double lambda_in = 0.0;
  double lambda_adm = 0.0;
  double p = 1.0;
  double lambda_star = kInfinity;
  std::string mode;
  std::vector<std::optional<double>> rt95;         // user-perceived
  std::vector<std::optional<double>> rt95_server;  // including abandoned requests
  double abandon_rate = 0.0;
  double reject_rate = 0.0;
  std::size_t in_flight = 0;
};

struct CurveSnapshot {
  SimTime time = 0.0;
  std::size_t tier = 0;
  std::vector<CurvePoint> knots;
};

struct TraceEntry {
  SimTime time;
  EventKind kind;
};

/// Totals after warmup.
struct RunSummary {
  double warmup = 0.0;
  double measured_span = 0.0;
  std::uint64_t arrivals = 0;
  std::uint64_t admitted = 0;
  std::uint64_t rejected = 0;
  std::uint64_t completed_sessions = 0;
  std::uint64_t abandoned_sessions = 0;
  double rejection_rate = 0.0;       // rejected / arrivals
  double mean_lambda_in = 0.0;
  double mean_lambda_adm = 0.0;
  double mean_admission_probability = 1.0;  // p seen by arriving sessions
  double throughput = 0.0;           // completed sessions per second
  double sla_violation_fraction = 0.0;  // RT checks failed / checks
  double admission_violation_fraction = 0.0;
  std::vector<double> rt_mean;
  std::vector<std::optional<double>> rt95;
  std::vector<std::optional<double>> rt95_server;
  std::vector<double> rt95_window_cv;   // across time-series rows
  std::vector<double> request_throughput;  // served requests per second, per tier
};

/// Whole-run counters, including the warmup.
struct RunCounters {
  std::uint64_t arrivals = 0;
  std::uint64_t admitted = 0;
  std::uint64_t rejected = 0;
  std::uint64_t completed_sessions = 0;
  std::uint64_t abandoned_sessions = 0;
  std::uint64_t in_flight_sessions = 0;
  std::uint64_t dropped_samples = 0;  // completions whose session had abandoned
  std::uint64_t events = 0;
  std::vector<TierCounters> tiers;
  double end_time = 0.0;
};

struct RunResult {
  std::string policy;
  std::vector<SeriesRow> series;
  std::vector<DecisionEvent> decisions;
  std::vector<ComplianceReport> compliance;
  std::vector<CurveSnapshot> curves;
  std::vector<double> bench_rt95;
  std::vector<SimTime> arrival_times;  // only with RunOptions::record_arrivals
  std::vector<TraceEntry> trace;       // only with RunOptions::record_trace
  RunSummary summary;
  RunCounters counters;
};

/// Receives metrics as they are produced.
class MetricSink {
 public:
  virtual ~MetricSink() = default;
  virtual void on_series(const SeriesRow&) {}
  virtual void on_decision(const DecisionEvent&) {}
  virtual void on_compliance(const ComplianceReport&) {}
};

struct RunOptions {
  bool record_trace = false;
  bool record_arrivals = false;
  MetricSink* sink = nullptr;
};

/// Runs a validated scenario up to its horizon. Deterministic in
/// (scenario, seed). Throws InternalError on a broken invariant.
RunResult run(const Scenario& scenario, const RunOptions& options = {});

/// Same, with a caller-supplied policy (tests and reference sweeps).
RunResult run_with_policy(const Scenario& scenario, std::unique_ptr<AdmissionPolicy> policy,
                          const RunOptions& options = {});

}  // namespace socsim
