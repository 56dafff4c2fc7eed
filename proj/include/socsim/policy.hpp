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

#include "socsim/rng.hpp"
#include "socsim/types.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace socsim {

/// A change in a policy's externally visible decision state.
struct DecisionEvent {
  SimTime time = 0.0;
  std::string kind;  // "p", "lambda_star", "mode", "tbac"
  double value = 0.0;
};

using DecisionSink = std::function<void(const DecisionEvent&)>;

struct PolicySnapshot {
  double p = 1.0;
  double lambda_star = kInfinity;  // +inf when the policy has no rate limit
  std::string mode = "normal";
};

/// Session admission strategy run by the dispatcher. Only the first request
/// of a session goes through `on_arrival`; requests of admitted sessions are
/// always forwarded.
class AdmissionPolicy {
 public:
  virtual ~AdmissionPolicy() = default;

  [[nodiscard]] virtual std::string name() const = 0;
  virtual void start(SimTime /*now*/) {}
  /// Decides on a new session; `coin` is the admission random stream.
  virtual bool on_arrival(SimTime now, RandomStream& coin) = 0;
  /// User-perceived response time of a request of an admitted session.
  virtual void on_response(SimTime /*now*/, TierIndex /*tier*/, double /*rt*/) {}
  /// Time of the next periodic control action, if any.
  [[nodiscard]] virtual std::optional<SimTime> next_tick() const { return std::nullopt; }
  virtual void on_tick(SimTime /*now*/) {}
  [[nodiscard]] virtual PolicySnapshot snapshot() const = 0;
  /// Admission probability currently applied to new sessions.
  [[nodiscard]] virtual double current_p() const { return snapshot().p; }

  void set_decision_sink(DecisionSink sink) { sink_ = std::move(sink); }

 protected:
  /// Forwards a decision value when it differs from the last one emitted for
  /// the same kind.
  void emit(SimTime now, const std::string& kind, double value);

 private:
  DecisionSink sink_;
  std::map<std::string, double> last_emitted_;
};

class AlwaysAdmitPolicy final : public AdmissionPolicy {
 public:
  [[nodiscard]] std::string name() const override { return "always"; }
  bool on_arrival(SimTime, RandomStream&) override { return true; }
  [[nodiscard]] PolicySnapshot snapshot() const override { return {}; }
  [[nodiscard]] double current_p() const override { return 1.0; }
};

/// Admits each session with a constant probability. Used to build the
/// fixed-rate reference curves.
class FixedProbabilityPolicy final : public AdmissionPolicy {
 public:
  explicit FixedProbabilityPolicy(double p) : p_(p) {}
  [[nodiscard]] std::string name() const override { return "fixed"; }
  bool on_arrival(SimTime, RandomStream& coin) override { return coin.uniform() < p_; }
  [[nodiscard]] PolicySnapshot snapshot() const override { return {p_, kInfinity, "normal"}; }
  [[nodiscard]] double current_p() const override { return p_; }

 private:
  double p_;
};

// ---------------------------------------------------------------------------
// Threshold-based admission control

enum class TbacDecision { accept_all, reject_new };

struct TbacConfig {
  std::vector<double> rt_threshold;  // seconds, per tier
  double period = 40.0;
  void validate(std::size_t tier_count) const;
};

/// reject_new iff some tier's 95th percentile exceeds its threshold. Tiers
/// without samples never trigger a rejection.
TbacDecision tbac_decide(const std::vector<double>& thresholds,
                         const std::vector<std::optional<double>>& rt95);

class TbacPolicy final : public AdmissionPolicy {
 public:
  TbacPolicy(TbacConfig cfg, std::size_t tier_count);

  [[nodiscard]] std::string name() const override { return "tbac"; }
  void start(SimTime now) override;
  bool on_arrival(SimTime now, RandomStream& coin) override;
  void on_response(SimTime now, TierIndex tier, double rt) override;
  [[nodiscard]] std::optional<SimTime> next_tick() const override { return next_tick_; }
  void on_tick(SimTime now) override;
  [[nodiscard]] PolicySnapshot snapshot() const override;

  [[nodiscard]] double current_p() const override {
    return decision_ == TbacDecision::accept_all ? 1.0 : 0.0;
  }
  [[nodiscard]] TbacDecision decision() const { return decision_; }

 private:
  TbacConfig cfg_;
  std::vector<std::vector<double>> period_samples_;
  TbacDecision decision_ = TbacDecision::accept_all;
  SimTime next_tick_ = 0.0;
};

// ---------------------------------------------------------------------------
// Probabilistic admission control

struct PacConfig {
  double rt_low = 3.0;
  double rt_high = 5.0;
  double period = 40.0;
  void validate() const;
};

/// Piecewise-linear acceptance probability of a single tier: 1 up to rt_low,
/// falling linearly to 0 at rt_high, 0 beyond.
double pac_tier_probability(const PacConfig& cfg, double rt);

/// Minimum over tiers of the per-tier probability; absent tiers count as 1.
double pac_probability(const PacConfig& cfg, const std::vector<std::optional<double>>& rt95);

class PacPolicy final : public AdmissionPolicy {
 public:
  PacPolicy(PacConfig cfg, std::size_t tier_count);

  [[nodiscard]] std::string name() const override { return "pac"; }
  void start(SimTime now) override;
  bool on_arrival(SimTime now, RandomStream& coin) override;
  void on_response(SimTime now, TierIndex tier, double rt) override;
  [[nodiscard]] std::optional<SimTime> next_tick() const override { return next_tick_; }
  void on_tick(SimTime now) override;
  [[nodiscard]] PolicySnapshot snapshot() const override;
  [[nodiscard]] double current_p() const override { return p_; }

 private:
  PacConfig cfg_;
  std::vector<std::vector<double>> period_samples_;
  double p_ = 1.0;
  SimTime next_tick_ = 0.0;
};

}  // namespace socsim
