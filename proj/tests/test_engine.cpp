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

#include "doctest.h"
#include "support.hpp"

#include "socsim/simulator.hpp"

#include <cmath>

using namespace socsim;

TEST_CASE("event queue pops by time then insertion order") {
  EventQueue q;
  q.schedule(2.0, EventKind::ControlTick, 1);
  q.schedule(1.0, EventKind::SessionArrival, 2);
  q.schedule(2.0, EventKind::SlaTick, 3);
  q.schedule(1.0, EventKind::ThinkExpiry, 4);
  std::vector<std::uint64_t> order;
  while (!q.empty()) order.push_back(q.pop().subject);
  CHECK(order == std::vector<std::uint64_t>{2, 4, 1, 3});
  CHECK(q.now() == 2.0);
}

TEST_CASE("scheduling in the past is an internal error") {
  EventQueue q;
  q.schedule(5.0, EventKind::SessionArrival);
  q.pop();
  CHECK_THROWS_AS(q.schedule(4.0, EventKind::SessionArrival), InternalError);
  CHECK_NOTHROW(q.schedule(5.0, EventKind::SessionArrival));
}

TEST_CASE("zero-rate profile: no sessions, only periodic events") {
  Scenario sc = test::three_tier(8.0, 800.0, PolicyKind::soc);
  sc.profile = TrafficProfile::constant(0.0);
  RunOptions opts;
  opts.record_trace = true;
  const RunResult r = run(sc, opts);
  CHECK(r.counters.arrivals == 0);
  CHECK(r.counters.tiers.at(2).dispatched == 0);
  for (const auto& e : r.trace) {
    const bool periodic = e.kind == EventKind::ControlTick || e.kind == EventKind::SlaTick ||
                          e.kind == EventKind::MetricSample || e.kind == EventKind::ProfileChange;
    CHECK(periodic);
  }
  CHECK_FALSE(r.series.empty());
  for (const auto& row : r.series) CHECK(row.lambda_in == 0.0);
}

TEST_CASE("Poisson arrival count within three standard deviations") {
  Scenario sc = test::mmc_scenario(200, 0.01, 10.0, 10000.0);
  const RunResult r = run(sc);
  const double expected = 100000.0;
  CHECK(std::abs(static_cast<double>(r.counters.arrivals) - expected) < 3.0 * std::sqrt(expected));
}

TEST_CASE("same seed gives identical results, different seed does not") {
  const Scenario sc = test::three_tier(8.0, 800.0, PolicyKind::soc);
  const RunResult a = run(sc);
  const RunResult b = run(sc);
  CHECK(a.counters.events == b.counters.events);
  REQUIRE(a.series.size() == b.series.size());
  for (std::size_t i = 0; i < a.series.size(); ++i) {
    CHECK(a.series[i].lambda_adm == b.series[i].lambda_adm);
    CHECK(a.series[i].rt95 == b.series[i].rt95);
    CHECK(a.series[i].p == b.series[i].p);
  }
  Scenario other = sc;
  other.seed = 2;
  CHECK(run(other).counters.events != a.counters.events);
}

TEST_CASE("session conservation holds for every policy") {
  for (auto kind : {PolicyKind::always, PolicyKind::soc, PolicyKind::soc_base, PolicyKind::tbac,
                    PolicyKind::pac}) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const RunResult r = run(test::three_tier(8.0, 600.0, kind, seed));
      const auto& c = r.counters;
      CHECK(c.arrivals == c.rejected + c.admitted);
      CHECK(c.admitted == c.in_flight_sessions + c.completed_sessions + c.abandoned_sessions);
    }
  }
}
