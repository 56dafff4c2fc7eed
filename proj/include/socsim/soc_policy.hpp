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

#include "socsim/policy.hpp"
#include "socsim/regressogram.hpp"
#include "socsim/window.hpp"

#include <cstdint>
#include <vector>

namespace socsim {

struct SocConfig {
  double control_period = 40.0;  // seconds between normal-mode control actions
  double slice_width = 0.0;      // lambda-axis slice length; 0 means lambda_min / 10
  double k_sigma = 3.0;          // change-detection multiplier
  bool change_detection = true;  // false gives the "Base" variant
  bool bench_anchor = true;      // false anchors every curve at the origin
  int bench_samples = 1000;

  void validate() const;
};

/// 95th percentile of response time per tier with requests sent one at a
/// time to an otherwise idle cluster.
std::vector<double> benchmark_idle(const ClusterSpec& cluster, RandomStream& stream,
                                   int samples_per_tier = 1000);

enum class SocMode { normal, flash_crowd };

/// Controller state visible for reporting and tests.
struct SocState {
  SocMode mode = SocMode::normal;
  std::uint64_t n = 0;
  double lambda_star = 0.0;
  double p = 1.0;
  std::uint64_t admitted_in_cycle = 0;  // N
  SimTime cycle_start = 0.0;
  double lambda_in_forecast = 0.0;
  SimTime episode_start = 0.0;
  std::uint64_t admitted_in_episode = 0;
  std::uint64_t infeasible_warnings = 0;
  std::uint64_t mode_switches = 0;
};

/// Outcome of the rate-limit validity test on a closed window.
struct RateLimitErrors {
  bool under = false;  // rate limit exceeded, yet every tier within its cap
  bool over = false;   // rate limit respected, yet some tier above its cap
};

RateLimitErrors classify_rate_limit_error(double lambda_adm, double lambda_star,
                                          const std::vector<std::optional<double>>& rt95,
                                          const std::vector<double>& rt_limit);

/// Cycle-admission excess AND rate excess beyond k standard deviations.
bool change_detected(std::uint64_t admitted_in_cycle, double elapsed, double lambda_star,
                     double control_period, double k_sigma, double sigma_lambda);

/// p = min(1, lambda_star / forecast); a non-positive forecast admits everything.
double admission_probability(double lambda_star, double lambda_in_forecast);

/// Self-configuring session admission control: learns the admitted-rate to
/// response-time curve of every tier and admits new sessions with the
/// probability that keeps the admitted rate at the curve's SLA crossing.
/// Switches to per-arrival control when a surge is detected.
class SocPolicy final : public AdmissionPolicy {
 public:
  SocPolicy(SocConfig cfg, SlaSpec sla, const std::vector<double>& bench_rt95);

  [[nodiscard]] std::string name() const override {
    return cfg_.change_detection ? "soc" : "soc-base";
  }
  void start(SimTime now) override;
  bool on_arrival(SimTime now, RandomStream& coin) override;
  void on_response(SimTime now, TierIndex tier, double rt) override;
  [[nodiscard]] std::optional<SimTime> next_tick() const override;
  void on_tick(SimTime now) override;
  [[nodiscard]] PolicySnapshot snapshot() const override;
  [[nodiscard]] double current_p() const override { return state_.p; }

  [[nodiscard]] const SocState& state() const { return state_; }
  [[nodiscard]] const std::vector<TierCurve>& curves() const { return curves_; }
  TierCurve& curve(std::size_t tier) { return curves_.at(tier); }
  [[nodiscard]] const RateVariance& rate_variance() const { return sigma_; }
  [[nodiscard]] const ObservationWindow& window() const { return window_; }
  [[nodiscard]] const SocConfig& config() const { return cfg_; }

  /// Error test plus, on error, a new rate limit from the inverted curves.
  /// Then recomputes p from the forecast. Exposed for tests.
  void update_admission_probability(const WindowStats& stats, SimTime now);

  /// Minimum over tiers of the curve crossing with the tier's cap.
  [[nodiscard]] double derive_rate_limit() const;

 private:
  void begin_cycle(SimTime now);
  void enter_flash_crowd(SimTime now);
  void leave_flash_crowd(SimTime now);
  void refresh_window_rule();
  void publish(SimTime now);

  SocConfig cfg_;
  SlaSpec sla_;
  std::vector<TierCurve> curves_;
  ObservationWindow window_;
  RateVariance sigma_;
  SocState state_;
};

}  // namespace socsim
