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

#include "socsim/policy.hpp"
#include "socsim/stats.hpp"

#include <algorithm>
#include <string>

namespace socsim {

void AdmissionPolicy::emit(SimTime now, const std::string& kind, double value) {
  auto [it, inserted] = last_emitted_.try_emplace(kind, value);
  if (!inserted) {
    if (it->second == value) return;
    it->second = value;
  }
  if (sink_) sink_(DecisionEvent{now, kind, value});
}

namespace {

std::vector<std::optional<double>> drain_rt95(std::vector<std::vector<double>>& samples) {
  std::vector<std::optional<double>> out(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    out[i] = percentile_nearest_rank(samples[i], 0.95);
    samples[i].clear();
  }
  return out;
}

}  // namespace

void TbacConfig::validate(std::size_t tier_count) const {
  if (rt_threshold.size() != tier_count)
    throw ConfigError("policy.tbac.thresholds must list one value per tier");
  for (double t : rt_threshold)
    if (!(t > 0.0)) throw ConfigError("policy.tbac.thresholds must be > 0");
  if (!(period > 0.0)) throw ConfigError("policy.tbac.period must be > 0");
}

TbacDecision tbac_decide(const std::vector<double>& thresholds,
                         const std::vector<std::optional<double>>& rt95) {
  for (std::size_t i = 0; i < thresholds.size() && i < rt95.size(); ++i) {
    if (rt95[i] && *rt95[i] > thresholds[i]) return TbacDecision::reject_new;
  }
  return TbacDecision::accept_all;
}

TbacPolicy::TbacPolicy(TbacConfig cfg, std::size_t tier_count)
    : cfg_(std::move(cfg)), period_samples_(tier_count) {}

void TbacPolicy::start(SimTime now) {
  next_tick_ = now + cfg_.period;
  emit(now, "tbac", 1.0);
}

bool TbacPolicy::on_arrival(SimTime, RandomStream&) {
  return decision_ == TbacDecision::accept_all;
}

void TbacPolicy::on_response(SimTime, TierIndex tier, double rt) {
  period_samples_[tier.value].push_back(rt);
}

void TbacPolicy::on_tick(SimTime now) {
  decision_ = tbac_decide(cfg_.rt_threshold, drain_rt95(period_samples_));
  next_tick_ = now + cfg_.period;
  emit(now, "tbac", decision_ == TbacDecision::accept_all ? 1.0 : 0.0);
}

PolicySnapshot TbacPolicy::snapshot() const {
  return {decision_ == TbacDecision::accept_all ? 1.0 : 0.0, kInfinity,
          decision_ == TbacDecision::accept_all ? "accept_all" : "reject_new"};
}

void PacConfig::validate() const {
  if (!(rt_low > 0.0) || !(rt_high > rt_low))
    throw ConfigError("policy.pac: need 0 < rt_low < rt_high");
  if (!(period > 0.0)) throw ConfigError("policy.pac.period must be > 0");
}

double pac_tier_probability(const PacConfig& cfg, double rt) {
  if (rt <= cfg.rt_low) return 1.0;
  if (rt <= cfg.rt_high) return (cfg.rt_high - rt) / (cfg.rt_high - cfg.rt_low);
  return 0.0;
}

double pac_probability(const PacConfig& cfg, const std::vector<std::optional<double>>& rt95) {
  double p = 1.0;
  for (const auto& r : rt95) {
    if (r) p = std::min(p, pac_tier_probability(cfg, *r));
  }
  return p;
}

PacPolicy::PacPolicy(PacConfig cfg, std::size_t tier_count)
    : cfg_(cfg), period_samples_(tier_count) {}

void PacPolicy::start(SimTime now) {
  next_tick_ = now + cfg_.period;
  emit(now, "p", p_);
}

bool PacPolicy::on_arrival(SimTime, RandomStream& coin) { return coin.uniform() < p_; }

void PacPolicy::on_response(SimTime, TierIndex tier, double rt) {
  period_samples_[tier.value].push_back(rt);
}

void PacPolicy::on_tick(SimTime now) {
  p_ = pac_probability(cfg_, drain_rt95(period_samples_));
  next_tick_ = now + cfg_.period;
  emit(now, "p", p_);
}

PolicySnapshot PacPolicy::snapshot() const { return {p_, kInfinity, "normal"}; }

}  // namespace socsim
