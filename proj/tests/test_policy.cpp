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

#include "socsim/policy.hpp"
#include "socsim/simulator.hpp"
#include "socsim/soc_policy.hpp"

#include <cmath>

using namespace socsim;

namespace {

SlaSpec sla(double lambda_min = 10.0) {
  SlaSpec s;
  s.rt_limit = {1.0, 2.0, 5.0};
  s.lambda_min = lambda_min;
  s.check_interval = 40.0;
  return s;
}

SliceStats point(double lambda, double rt, double width = 1.0) {
  const double lo = std::floor(lambda / width) * width;
  SliceStats s(lo, lo + width);
  for (int i = 0; i < 5; ++i) s.add(lambda, rt);
  return s;
}

WindowStats stats(double lambda_in, double lambda_adm, std::vector<std::optional<double>> rt) {
  WindowStats s;
  s.valid = true;
  s.has_rate_in = true;
  s.start = 0.0;
  s.end = 40.0;
  s.lambda_in = lambda_in;
  s.lambda_adm = lambda_adm;
  s.rt95 = std::move(rt);
  return s;
}

// Curves that invert to (inf, 40, 12) for limits (1, 2, 5).
SocPolicy policy_with_curves(SocConfig cfg = {}) {
  SocPolicy p(cfg, sla(), {0.1, 1.0, 1.0});
  p.curve(1).set_slices({point(20.0, 1.5)});
  p.curve(2).set_slices({point(6.0, 3.0)});
  return p;
}

}  // namespace

TEST_CASE("change detection truth table") {
  CHECK_FALSE(change_detected(0, 10.0, 10.0, 30.0, 3.0, 2.0));
  CHECK(change_detected(400, 10.0, 10.0, 30.0, 3.0, 2.0));
  CHECK_FALSE(change_detected(400, 50.0, 10.0, 30.0, 3.0, 2.0));
  CHECK_FALSE(change_detected(400, 0.0, 10.0, 30.0, 3.0, 2.0));
  CHECK_FALSE(change_detected(300, 5.0, 10.0, 30.0, 3.0, 2.0));
}

TEST_CASE("admission probability formula") {
  CHECK(admission_probability(10.0, 20.0) == doctest::Approx(0.5));
  CHECK(admission_probability(10.0, 5.0) == 1.0);
  CHECK(admission_probability(10.0, 0.0) == 1.0);
  CHECK(admission_probability(0.0, 5.0) == 0.0);
  double previous = 1.0;
  for (double l = 0.5; l < 100.0; l += 0.5) {
    const double p = admission_probability(7.0, l);
    CHECK(p <= previous);
    previous = p;
  }
}

TEST_CASE("rate limit error classification") {
  const std::vector<double> limits{1.0, 2.0, 5.0};
  const auto under = classify_rate_limit_error(12.0, 10.0, {0.1, 0.5, 4.0}, limits);
  CHECK(under.under);
  CHECK_FALSE(under.over);
  const auto over = classify_rate_limit_error(8.0, 10.0, {0.1, 0.5, 6.0}, limits);
  CHECK(over.over);
  CHECK_FALSE(over.under);
  const auto none = classify_rate_limit_error(8.0, 10.0, {0.1, 0.5, 4.0}, limits);
  CHECK_FALSE(none.under);
  CHECK_FALSE(none.over);
  // Absent measurements count as non-violating.
  const auto absent = classify_rate_limit_error(12.0, 10.0, {0.1, std::nullopt, 4.0}, limits);
  CHECK(absent.under);
}

TEST_CASE("rate limit is the minimum of the per-tier inversions") {
  SocPolicy p = policy_with_curves();
  CHECK(std::isinf(p.curves()[0].invert(1.0)));
  CHECK(p.curves()[1].invert(2.0) == doctest::Approx(40.0));
  CHECK(p.curves()[2].invert(5.0) == doctest::Approx(12.0));
  CHECK(p.derive_rate_limit() == doctest::Approx(12.0));
}

TEST_CASE("SOC initial state") {
  SocPolicy p({}, sla(2.0), {0.003, 0.03, 3.0});
  p.start(0.0);
  CHECK(p.current_p() == 1.0);
  CHECK(p.state().lambda_star == 2.0);
  CHECK(p.state().mode == SocMode::normal);
  CHECK(p.curves()[2].knots() == std::vector<CurvePoint>{{0.0, 3.0}});
  CHECK(p.next_tick() == doctest::Approx(40.0));
}

TEST_CASE("SOC rate limit updates only on errors") {
  SocPolicy p = policy_with_curves();
  p.start(0.0);
  REQUIRE(p.state().lambda_star == 10.0);

  p.update_admission_probability(stats(20.0, 8.0, {0.1, 0.5, 4.0}), 40.0);
  CHECK(p.state().lambda_star == 10.0);
  CHECK(p.current_p() == doctest::Approx(0.5));

  p.update_admission_probability(stats(20.0, 12.0, {0.1, 0.5, 4.0}), 80.0);
  CHECK(p.state().lambda_star == doctest::Approx(12.0));
  CHECK(p.current_p() == doctest::Approx(0.6));

  p.update_admission_probability(stats(5.0, 4.0, {0.1, 0.5, 4.0}), 120.0);
  CHECK(p.current_p() == 1.0);
}

TEST_CASE("SOC infeasible SLA drives p to zero with a warning") {
  SocPolicy p({}, sla(), {0.1, 1.0, 6.0});  // idle database already above 5 s
  p.start(0.0);
  p.update_admission_probability(stats(20.0, 8.0, {0.1, 0.5, 6.5}), 40.0);
  CHECK(p.state().lambda_star == 0.0);
  CHECK(p.current_p() == 0.0);
  CHECK(p.state().infeasible_warnings == 1);
}

TEST_CASE("SOC tick without samples keeps the limit and refreshes p") {
  SocConfig cfg;
  cfg.change_detection = false;
  SocPolicy p = policy_with_curves(cfg);
  p.start(0.0);
  RandomStream coin(1);
  for (int i = 0; i < 800; ++i) p.on_arrival(i * 0.05, coin);
  p.on_tick(40.0);
  CHECK(p.state().lambda_star == 10.0);
  CHECK(p.state().n == 1);
  CHECK(p.state().admitted_in_cycle == 0);
  CHECK(p.current_p() < 1.0);
  CHECK(p.next_tick() == doctest::Approx(80.0));
}

TEST_CASE("flash crowd: detection, per-arrival adaptation and return to normal") {
  SocConfig cfg;
  cfg.control_period = 10.0;
  SocPolicy p(cfg, sla(2.0), {0.003, 0.03, 3.0});
  std::vector<DecisionEvent> log;
  p.set_decision_sink([&](const DecisionEvent& e) { log.push_back(e); });
  p.start(0.0);
  RandomStream coin(2);
  SimTime t = 0.0;
  bool entered = false;
  for (int i = 0; i < 40 && !entered; ++i) {
    t += 0.01;
    p.on_arrival(t, coin);
    entered = p.state().mode == SocMode::flash_crowd;
  }
  REQUIRE(entered);
  CHECK(p.state().admitted_in_cycle > 20);
  CHECK_FALSE(p.next_tick().has_value());
  // The crowd keeps arriving; p follows lambda* / lambda_in and the mode ends
  // once the admitted rate drops under the limit.
  for (int i = 0; i < 200 && p.state().mode == SocMode::flash_crowd; ++i) {
    t += 0.01;
    p.on_arrival(t, coin);
  }
  CHECK(p.state().mode == SocMode::normal);
  CHECK(p.current_p() < 0.5);
  CHECK(p.state().mode_switches == 2);
  bool saw_mode_on = false;
  for (const auto& e : log) saw_mode_on = saw_mode_on || (e.kind == "mode" && e.value == 1.0);
  CHECK(saw_mode_on);
}

TEST_CASE("SOC-Base never enters flash-crowd mode") {
  SocConfig cfg;
  cfg.control_period = 10.0;
  cfg.change_detection = false;
  SocPolicy p(cfg, sla(2.0), {0.003, 0.03, 3.0});
  CHECK(p.name() == "soc-base");
  p.start(0.0);
  RandomStream coin(3);
  for (int i = 1; i <= 900; ++i) {
    p.on_arrival(i * 0.01, coin);
    REQUIRE(p.state().mode == SocMode::normal);
  }
}

TEST_CASE("idle benchmark matches exponential quantiles") {
  const Scenario sc = default_scenario();
  RandomStream bench(4);
  const auto rt = benchmark_idle(sc.cluster, bench, 100000);
  const double q = -std::log(0.05);
  CHECK(rt[0] == doctest::Approx(0.001 * q).epsilon(0.02));
  CHECK(rt[1] == doctest::Approx(0.01 * q).epsilon(0.02));
  CHECK(rt[2] == doctest::Approx(q).epsilon(0.02));
}

TEST_CASE("fixed probability follows the seeded coin sequence") {
  FixedProbabilityPolicy p(0.5);
  RandomStream coin(5), mirror(5);
  for (int i = 0; i < 1000; ++i) CHECK(p.on_arrival(i, coin) == (mirror.uniform() < 0.5));
  AlwaysAdmitPolicy always;
  CHECK(always.on_arrival(0.0, coin));
}

TEST_CASE("PAC probability branches") {
  const PacConfig cfg{3.0, 5.0, 40.0};
  CHECK(pac_tier_probability(cfg, 2.0) == 1.0);
  CHECK(pac_tier_probability(cfg, 4.0) == doctest::Approx(0.5));
  CHECK(pac_tier_probability(cfg, 6.0) == 0.0);
  CHECK(pac_tier_probability(cfg, 3.0) == 1.0);
  CHECK(pac_tier_probability(cfg, 5.0) == 0.0);
  double previous = 1.0;
  for (double r = 0.0; r < 8.0; r += 0.01) {
    const double p = pac_tier_probability(cfg, r);
    CHECK(p <= previous);
    CHECK(std::abs(p - previous) < 0.01);
    previous = p;
  }
  CHECK(pac_probability(cfg, {2.0, 4.5, std::nullopt}) == doctest::Approx(0.25));
  CHECK(pac_probability(cfg, {std::nullopt}) == 1.0);
}

TEST_CASE("TBAC decisions") {
  const std::vector<double> thr{1.0, 2.0, 5.0};
  CHECK(tbac_decide(thr, {0.1, 0.5, 4.0}) == TbacDecision::accept_all);
  CHECK(tbac_decide(thr, {0.1, 0.5, 5.2}) == TbacDecision::reject_new);
  CHECK(tbac_decide(thr, {std::nullopt, std::nullopt, std::nullopt}) == TbacDecision::accept_all);
}

TEST_CASE("TBAC alternates with scripted per-period statistics") {
  TbacPolicy p({{5.0}, 10.0}, 1);
  p.start(0.0);
  RandomStream coin(6);
  CHECK(p.on_arrival(1.0, coin));
  p.on_response(5.0, TierIndex{0}, 7.0);
  p.on_tick(10.0);
  CHECK(p.decision() == TbacDecision::reject_new);
  CHECK_FALSE(p.on_arrival(11.0, coin));
  p.on_response(15.0, TierIndex{0}, 2.0);
  p.on_tick(20.0);
  CHECK(p.decision() == TbacDecision::accept_all);
  CHECK(p.on_arrival(21.0, coin));
  // Only the last period counts: an empty period accepts.
  p.on_response(25.0, TierIndex{0}, 9.0);
  p.on_tick(30.0);
  p.on_tick(40.0);
  CHECK(p.decision() == TbacDecision::accept_all);
  CHECK(p.next_tick() == doctest::Approx(50.0));
}

TEST_CASE("policy override keeps the arrival trace and changes admissions") {
  RunOptions opts;
  opts.record_arrivals = true;
  const Scenario soc = test::three_tier(8.0, 800.0, PolicyKind::soc);
  Scenario tbac = soc;
  tbac.policy.kind = PolicyKind::tbac;
  const RunResult a = run(soc, opts);
  const RunResult b = run(tbac, opts);
  CHECK(a.arrival_times == b.arrival_times);
  CHECK(a.counters.admitted != b.counters.admitted);
}

TEST_CASE("SOC admits everything under light load") {
  const RunResult r = run(test::three_tier(1.2, 2000.0, PolicyKind::soc));
  CHECK(r.summary.mean_admission_probability >= 0.99);
}

TEST_CASE("origin anchor converges to the same rate limit as the benchmark anchor") {
  Scenario a = test::three_tier(8.0, 8000.0, PolicyKind::soc);
  a.warmup = 3000.0;
  Scenario b = a;
  b.policy.soc.bench_anchor = false;
  const RunResult ra = run(a);
  const RunResult rb = run(b);
  CHECK(rb.summary.mean_lambda_adm == doctest::Approx(ra.summary.mean_lambda_adm).epsilon(0.15));
}
