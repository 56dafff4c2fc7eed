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

#include "socsim/cluster.hpp"
#include "socsim/simulator.hpp"
#include "socsim/stats.hpp"

#include <cmath>

using namespace socsim;

namespace {

// Mean queueing delay of an M/M/c queue.
double erlang_c_wait(int c, double lambda, double mean_service) {
  const double a = lambda * mean_service;  // offered load in Erlangs
  const double rho = a / c;
  double term = 1.0, sum = 0.0;
  for (int k = 0; k < c; ++k) {
    sum += term;
    term *= a / (k + 1);
  }
  const double tail = term / (1.0 - rho);
  const double p_wait = tail / (sum + tail);
  return p_wait / (c / mean_service - lambda);
}

std::vector<RandomStream> one_stream(std::uint64_t seed) { return {RandomStream(seed)}; }

class CountingPolicy final : public AdmissionPolicy {
 public:
  explicit CountingPolicy(std::vector<double>* samples) : samples_(samples) {}
  std::string name() const override { return "counting"; }
  bool on_arrival(SimTime, RandomStream&) override { return true; }
  void on_response(SimTime, TierIndex, double rt) override { samples_->push_back(rt); }
  PolicySnapshot snapshot() const override { return {}; }

 private:
  std::vector<double>* samples_;
};

}  // namespace

TEST_CASE("idle tier: response time is the Exp(1) service time") {
  ClusterSpec spec;
  spec.tiers = {{"db", 1, 1.0}};
  Cluster cluster(spec);
  auto streams = one_stream(9);
  std::vector<double> rts;
  SimTime t = 0.0;
  for (int i = 0; i < 1000000; ++i) {
    auto [id, started] = cluster.dispatch(SessionId{1}, TierIndex{0}, t, streams);
    REQUIRE(started);
    t = started->completion;
    const auto done = cluster.complete(id, t, streams);
    rts.push_back(*done.request.response_time);
  }
  CHECK(*rt95(rts) == doctest::Approx(-std::log(0.05)).epsilon(0.02));
}

TEST_CASE("busy single server queues FIFO and response time is completion minus dispatch") {
  ClusterSpec spec;
  spec.tiers = {{"db", 1, 1.0}};
  Cluster cluster(spec);
  auto streams = one_stream(10);
  auto [first, started] = cluster.dispatch(SessionId{1}, TierIndex{0}, 3.0, streams);
  REQUIRE(started);
  std::vector<RequestId> queued;
  for (int i = 0; i < 20; ++i) {
    auto [rid, s] = cluster.dispatch(SessionId{2 + static_cast<std::uint64_t>(i)}, TierIndex{0}, 3.0, streams);
    CHECK_FALSE(s);
    queued.push_back(rid);
  }
  CHECK(cluster.tier(TierIndex{0}).queue_length() == 20);

  auto done = cluster.complete(first, started->completion, streams);
  CHECK(*done.request.response_time == doctest::Approx(started->completion - 3.0));
  double previous = *done.request.response_time;
  std::size_t served = 0;
  while (done.next) {
    CHECK(done.next->id == queued[served]);
    done = cluster.complete(done.next->id, done.next->completion, streams);
    CHECK(*done.request.response_time > previous);
    previous = *done.request.response_time;
    ++served;
  }
  CHECK(served == 20);
  CHECK(cluster.in_flight() == 0);
}

TEST_CASE("M/M/20 at 15/s: Erlang-C mean wait and Little's law") {
  const Scenario sc = test::mmc_scenario(20, 1.0, 15.0, 20000.0);
  const RunResult r = run(sc);
  const auto& c = r.counters.tiers.at(0);
  const double wait = c.wait_sum / static_cast<double>(c.completed);
  CHECK(wait == doctest::Approx(erlang_c_wait(20, 15.0, 1.0)).epsilon(0.05));
  const double mean_in_system = c.occupancy_area / r.counters.end_time;
  const double throughput = static_cast<double>(c.completed) / r.counters.end_time;
  const double mean_response = c.response_sum / static_cast<double>(c.completed);
  CHECK(mean_in_system == doctest::Approx(throughput * mean_response).epsilon(0.05));
}

TEST_CASE("Erlang-C oracle sanity") {
  // M/M/1: Wq = rho / (mu - lambda).
  CHECK(erlang_c_wait(1, 0.5, 1.0) == doctest::Approx(1.0));
  CHECK(erlang_c_wait(2, 1.0, 1.0) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("rejected sessions put no load on the cluster") {
  Scenario sc = test::mmc_scenario(20, 1.0, 10.0, 200.0);
  sc.policy.kind = PolicyKind::fixed;
  sc.policy.fixed_p = 0.0;
  const RunResult r = run(sc);
  CHECK(r.counters.arrivals > 1000);
  CHECK(r.counters.rejected == r.counters.arrivals);
  CHECK(r.counters.tiers.at(0).dispatched == 0);
  CHECK(r.counters.tiers.at(0).busy_area == 0.0);
  CHECK(r.summary.mean_lambda_in > 9.0);
  CHECK(r.summary.mean_lambda_adm == 0.0);
}

TEST_CASE("late completion of an abandoned request yields no sample") {
  // Service takes 10 s on average, clients wait at most 1 s.
  Scenario sc = test::mmc_scenario(1, 10.0, 0.5, 500.0);
  sc.session.client_timeout = 1.0;
  sc.validate();
  std::vector<double> samples;
  const RunResult r = run_with_policy(sc, std::make_unique<CountingPolicy>(&samples));
  CHECK(r.counters.dropped_samples > 0);
  CHECK(r.counters.abandoned_sessions > 0);
  std::size_t timeouts = 0;
  for (double x : samples) {
    CHECK(x <= 1.0);
    if (x == 1.0) ++timeouts;
  }
  // Every abandonment reports the timeout it waited, never the late completion.
  CHECK(timeouts == r.counters.abandoned_sessions);
}
