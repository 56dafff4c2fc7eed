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

#include <vector>

namespace socsim {

/// Piecewise-constant session arrival intensity.
struct ProfileSegment {
  SimTime start = 0.0;
  double rate = 0.0;  // sessions/second
};

class TrafficProfile {
 public:
  TrafficProfile() = default;
  explicit TrafficProfile(std::vector<ProfileSegment> segments);

  static TrafficProfile constant(double rate) { return TrafficProfile({{0.0, rate}}); }

  [[nodiscard]] double rate_at(SimTime t) const;
  /// Start of the segment following the one active at `t`, or +inf.
  [[nodiscard]] SimTime next_change_after(SimTime t) const;
  [[nodiscard]] const std::vector<ProfileSegment>& segments() const { return segments_; }

  void validate() const;

 private:
  [[nodiscard]] std::size_t segment_index(SimTime t) const;
  std::vector<ProfileSegment> segments_;
};

/// Distribution of the number of requests in one session phase.
struct CountDistribution {
  enum class Kind { fixed, geometric, uniform };
  Kind kind = Kind::fixed;
  int value = 1;       // fixed
  double mean = 1.0;   // geometric on {1, 2, ...}
  int low = 1, high = 1;  // uniform, inclusive

  static CountDistribution fixed_count(int n) { return {Kind::fixed, n, 1.0, 1, 1}; }
  static CountDistribution geometric_mean(double m) { return {Kind::geometric, 1, m, 1, 1}; }

  [[nodiscard]] double expected() const;
  int draw(RandomStream& stream) const;
  void validate() const;
};

struct SessionPhase {
  TierIndex tier;
  CountDistribution count;
};

struct SessionTemplate {
  std::vector<SessionPhase> phase_plan;
  double think_mean = 10.0;      // seconds
  double think_floor = 1.0;      // seconds
  double client_timeout = 8.0;   // seconds, per request; may be +inf

  [[nodiscard]] double expected_requests() const;
  void validate(std::size_t tier_count) const;
};

/// Next session arrival after `current`. Zero-rate segments are skipped; when
/// no later segment has a positive rate the result is +inf. Arrivals are
/// drawn segment by segment, so a gap that crosses a segment boundary is
/// redrawn at the new rate (memorylessness makes this exact).
SimTime next_arrival(SimTime current, const TrafficProfile& profile, RandomStream& stream);

/// max(-ln(r) * think_mean, think_floor), r uniform in (0, 1].
double draw_think_time(RandomStream& stream, const SessionTemplate& tmpl);
double think_time_from_uniform(double r, const SessionTemplate& tmpl);

/// Samples each phase's count and expands the plan into a flat tier sequence.
SessionRecord build_session(RandomStream& stream, const SessionTemplate& tmpl, SessionId id,
                            SimTime arrival);

}  // namespace socsim
