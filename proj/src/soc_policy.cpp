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

#include "socsim/soc_policy.hpp"

#include "socsim/cluster.hpp"
#include "socsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace socsim {

void SocConfig::validate() const {
  if (!(control_period > 0.0)) throw ConfigError("policy.soc.control_period must be > 0");
  if (!(slice_width >= 0.0)) throw ConfigError("policy.soc.slice_width must be >= 0");
  if (!(k_sigma >= 0.0)) throw ConfigError("policy.soc.k_sigma must be >= 0");
  if (bench_samples < 1) throw ConfigError("policy.soc.bench_samples must be >= 1");
}

std::vector<double> benchmark_idle(const ClusterSpec& cluster, RandomStream& stream,
                                   int samples_per_tier) {
  Cluster idle(cluster);
  std::vector<RandomStream> service;
  for (std::size_t i = 0; i < cluster.tier_count(); ++i) service.emplace_back(stream.next_u64());

  std::vector<double> out;
  SimTime now = 0.0;
  for (std::size_t i = 0; i < cluster.tier_count(); ++i) {
    std::vector<double> rts;
    rts.reserve(static_cast<std::size_t>(samples_per_tier));
    for (int s = 0; s < samples_per_tier; ++s) {
      auto [id, started] = idle.dispatch(SessionId{0}, TierIndex{i}, now, service);
      if (!started || idle.tier(TierIndex{i}).queue_length() != 0)
        throw InternalError("idle benchmark observed queueing");
      now = started->completion;
      rts.push_back(*idle.complete(id, now, service).request.response_time);
    }
    out.push_back(*percentile_nearest_rank(rts, 0.95));
  }
  return out;
}

RateLimitErrors classify_rate_limit_error(double lambda_adm, double lambda_star,
                                          const std::vector<std::optional<double>>& rt95,
                                          const std::vector<double>& rt_limit) {
  bool all_below = true;
  bool any_above = false;
  for (std::size_t i = 0; i < rt_limit.size() && i < rt95.size(); ++i) {
    if (!rt95[i]) continue;
    if (!(*rt95[i] < rt_limit[i])) all_below = false;
    if (*rt95[i] > rt_limit[i]) any_above = true;
  }
  return {lambda_adm >= lambda_star && all_below, lambda_adm <= lambda_star && any_above};
}

bool change_detected(std::uint64_t admitted_in_cycle, double elapsed, double lambda_star,
                     double control_period, double k_sigma, double sigma_lambda) {
  if (!(elapsed > 0.0)) return false;
  const auto n = static_cast<double>(admitted_in_cycle);
  return n > lambda_star * control_period && n / elapsed > lambda_star + k_sigma * sigma_lambda;
}

double admission_probability(double lambda_star, double lambda_in_forecast) {
  if (!(lambda_in_forecast > 0.0)) return 1.0;
  return std::clamp(lambda_star / lambda_in_forecast, 0.0, 1.0);
}

SocPolicy::SocPolicy(SocConfig cfg, SlaSpec sla, const std::vector<double>& bench_rt95)
    : cfg_(cfg), sla_(std::move(sla)), window_(sla_.tier_count()) {
  if (cfg_.slice_width <= 0.0) cfg_.slice_width = sla_.lambda_min > 0.0 ? sla_.lambda_min / 10.0 : 0.1;
  curves_.reserve(sla_.tier_count());
  for (std::size_t i = 0; i < sla_.tier_count(); ++i) {
    const double anchor_rt = cfg_.bench_anchor && i < bench_rt95.size() ? bench_rt95[i] : 0.0;
    curves_.emplace_back(cfg_.slice_width, CurvePoint{0.0, anchor_rt});
  }
  state_.lambda_star = sla_.lambda_min;
  state_.p = 1.0;
  state_.lambda_in_forecast = sla_.lambda_min;
}

void SocPolicy::refresh_window_rule() {
  window_.set_rule(state_.lambda_in_forecast, state_.lambda_star, cfg_.control_period);
}

void SocPolicy::publish(SimTime now) {
  emit(now, "p", state_.p);
  emit(now, "lambda_star", state_.lambda_star);
  emit(now, "mode", state_.mode == SocMode::flash_crowd ? 1.0 : 0.0);
}

void SocPolicy::begin_cycle(SimTime now) {
  state_.cycle_start = now;
  state_.admitted_in_cycle = 0;
  refresh_window_rule();
  window_.restart(now);
}

void SocPolicy::start(SimTime now) {
  begin_cycle(now);
  publish(now);
}

void SocPolicy::enter_flash_crowd(SimTime now) {
  state_.mode = SocMode::flash_crowd;
  state_.episode_start = now;
  state_.admitted_in_episode = 0;
  ++state_.mode_switches;
  refresh_window_rule();
  window_.restart(now);
}

void SocPolicy::leave_flash_crowd(SimTime now) {
  state_.mode = SocMode::normal;
  ++state_.mode_switches;
  begin_cycle(now);
}

bool SocPolicy::on_arrival(SimTime now, RandomStream& coin) {
  window_.record_arrival(now);

  if (state_.mode == SocMode::flash_crowd) {
    // Statistics refresh and p adaptation on every arrival; the curve is
    // frozen, so the rate limit stays where normal mode left it.
    const WindowStats stats = window_.update_stats(now);
    if (stats.has_rate_in) state_.lambda_in_forecast = stats.lambda_in;
    ++state_.n;
    state_.p = admission_probability(state_.lambda_star, state_.lambda_in_forecast);
    refresh_window_rule();

    const bool admit = coin.uniform() < state_.p;
    if (admit) {
      ++state_.admitted_in_episode;
      window_.record_admission(now);
    }
    const double elapsed = now - state_.episode_start;
    if (elapsed > 0.0 &&
        static_cast<double>(state_.admitted_in_episode) / elapsed < state_.lambda_star) {
      leave_flash_crowd(now);
    }
    publish(now);
    return admit;
  }

  const bool admit = coin.uniform() < state_.p;
  if (admit) {
    ++state_.admitted_in_cycle;
    window_.record_admission(now);
  }
  if (cfg_.change_detection &&
      change_detected(state_.admitted_in_cycle, now - state_.cycle_start, state_.lambda_star,
                      cfg_.control_period, cfg_.k_sigma, sigma_.sigma())) {
    enter_flash_crowd(now);
    publish(now);
  }
  return admit;
}

void SocPolicy::on_response(SimTime now, TierIndex tier, double rt) {
  window_.record_response(now, tier, rt);
}

std::optional<SimTime> SocPolicy::next_tick() const {
  if (state_.mode != SocMode::normal) return std::nullopt;
  return state_.cycle_start + cfg_.control_period;
}

double SocPolicy::derive_rate_limit() const {
  double limit = kInfinity;
  for (std::size_t i = 0; i < curves_.size(); ++i) {
    limit = std::min(limit, curves_[i].invert(sla_.rt_limit[i]));
  }
  return limit;
}

void SocPolicy::update_admission_probability(const WindowStats& stats, SimTime) {
  if (stats.valid && stats.has_samples()) {
    const auto err =
        classify_rate_limit_error(stats.lambda_adm, state_.lambda_star, stats.rt95, sla_.rt_limit);
    if (err.under || err.over) {
      state_.lambda_star = derive_rate_limit();
      if (state_.lambda_star <= 0.0) {
        state_.lambda_star = 0.0;
        ++state_.infeasible_warnings;
      }
    }
  }
  if (stats.has_rate_in) state_.lambda_in_forecast = stats.lambda_in;
  state_.p = admission_probability(state_.lambda_star, state_.lambda_in_forecast);
  refresh_window_rule();
}

void SocPolicy::on_tick(SimTime now) {
  const WindowStats stats = window_.update_stats(now);
  if (stats.valid) {
    for (std::size_t i = 0; i < curves_.size(); ++i) {
      if (stats.rt95[i]) curves_[i].insert(stats.lambda_adm, *stats.rt95[i]);
    }
    if (stats.lambda_in > state_.lambda_star) sigma_.add(stats.lambda_adm);
  }
  update_admission_probability(stats, now);
  ++state_.n;
  begin_cycle(now);
  publish(now);
}

PolicySnapshot SocPolicy::snapshot() const {
  return {state_.p, state_.lambda_star,
          state_.mode == SocMode::flash_crowd ? "flash_crowd" : "normal"};
}

}  // namespace socsim
