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

#include "socsim/stats.hpp"
#include "socsim/types.hpp"

#include <deque>
#include <optional>
#include <vector>

namespace socsim {

/// Statistics over the current observation set.
struct WindowStats {
  bool valid = false;  // false when no session has been admitted in the window
  bool has_rate_in = false;  // lambda_in is meaningful (also without admissions)
  SimTime start = 0.0;
  SimTime end = 0.0;
  std::size_t sessions = 0;  // admitted sessions in the window
  std::size_t arrivals = 0;
  double lambda_in = 0.0;
  double lambda_adm = 0.0;
  std::vector<std::optional<double>> rt95;  // absent for tiers without samples

  [[nodiscard]] bool has_samples() const;
};

/// Sliding observation set over the most recent admitted sessions.
///
/// The set holds the last min(floor(lambda_in * t), floor(lambda_star * T_AC))
/// admitted sessions (never fewer than one once a session was admitted),
/// where t is the time since the last restart. Rates are taken over the time
/// span from the oldest session in the set to now; response-time samples are
/// the ones that completed inside that span.
class ObservationWindow {
 public:
  explicit ObservationWindow(std::size_t tier_count);

  /// Inputs of the size rule.
  void set_rule(double lambda_in_estimate, double lambda_star, double control_period);
  /// Resets the origin of t, e.g. at a cycle start or a mode change.
  void restart(SimTime origin);

  void record_arrival(SimTime now);
  void record_admission(SimTime now);
  void record_response(SimTime now, TierIndex tier, double rt);

  /// Size-rule capacity at `now`.
  [[nodiscard]] std::size_t capacity(SimTime now) const;
  /// Sessions in the window as of the last update.
  [[nodiscard]] std::size_t size() const { return window_count_; }
  [[nodiscard]] SimTime origin() const { return origin_; }

  WindowStats update_stats(SimTime now);

 private:
  struct Sample {
    SimTime time;
    std::size_t tier;
    double rt;
  };

  void evict(SimTime now);

  std::size_t tier_count_;
  double lambda_in_estimate_ = 0.0;
  double lambda_star_ = kInfinity;
  double control_period_ = 0.0;
  SimTime origin_ = 0.0;
  std::deque<SimTime> admissions_;
  std::size_t window_count_ = 0;
  std::deque<SimTime> arrivals_;
  std::deque<Sample> samples_;
};

/// Sample standard deviation of the admitted rate, collected only over
/// iterations where the incoming rate exceeded the rate limit.
class RateVariance {
 public:
  void add(double lambda_adm) { moments_.add(lambda_adm); }
  [[nodiscard]] double sigma() const { return moments_.stddev(); }
  [[nodiscard]] std::size_t count() const { return moments_.count(); }

 private:
  RunningMoments moments_;
};

}  // namespace socsim
