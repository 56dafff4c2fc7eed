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

#include "socsim/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace socsim {

TrafficProfile::TrafficProfile(std::vector<ProfileSegment> segments)
    : segments_(std::move(segments)) {}

void TrafficProfile::validate() const {
  if (segments_.empty()) throw ConfigError("traffic.profile must have at least one segment");
  if (segments_.front().start != 0.0)
    throw ConfigError("traffic.profile: first segment must start at 0");
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    if (!(segments_[i].rate >= 0.0) || !std::isfinite(segments_[i].rate))
      throw ConfigError("traffic.profile segment " + std::to_string(i + 1) +
                        ": rate must be a finite value >= 0");
    if (i > 0 && !(segments_[i].start > segments_[i - 1].start))
      throw ConfigError("traffic.profile segment " + std::to_string(i + 1) +
                        ": start times must be strictly increasing");
  }
}

std::size_t TrafficProfile::segment_index(SimTime t) const {
  auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                             [](SimTime v, const ProfileSegment& s) { return v < s.start; });
  return it == segments_.begin() ? 0 : static_cast<std::size_t>(it - segments_.begin()) - 1;
}

double TrafficProfile::rate_at(SimTime t) const {
  if (segments_.empty()) return 0.0;
  return segments_[segment_index(t)].rate;
}

SimTime TrafficProfile::next_change_after(SimTime t) const {
  if (segments_.empty()) return kInfinity;
  const std::size_t i = segment_index(t);
  return i + 1 < segments_.size() ? segments_[i + 1].start : kInfinity;
}

SimTime next_arrival(SimTime current, const TrafficProfile& profile, RandomStream& stream) {
  SimTime t = current;
  while (std::isfinite(t)) {
    const double rate = profile.rate_at(t);
    const SimTime boundary = profile.next_change_after(t);
    if (rate <= 0.0) {
      t = boundary;
      continue;
    }
    const SimTime candidate = t + draw_exponential(stream, 1.0 / rate);
    if (candidate < boundary) return candidate;
    t = boundary;
  }
  return kInfinity;
}

double think_time_from_uniform(double r, const SessionTemplate& tmpl) {
  return std::max(-std::log(r) * tmpl.think_mean, tmpl.think_floor);
}

double draw_think_time(RandomStream& stream, const SessionTemplate& tmpl) {
  return think_time_from_uniform(stream.uniform_open_closed(), tmpl);
}

double CountDistribution::expected() const {
  switch (kind) {
    case Kind::fixed: return value;
    case Kind::geometric: return mean;
    case Kind::uniform: return 0.5 * (low + high);
  }
  return 0.0;
}

int CountDistribution::draw(RandomStream& stream) const {
  switch (kind) {
    case Kind::fixed: return value;
    case Kind::geometric: {
      if (mean <= 1.0) return 1;
      // P(K = k) = (1-q)^(k-1) q on k >= 1, with q = 1/mean.
      const double q = 1.0 / mean;
      const double u = stream.uniform_open_closed();
      return 1 + static_cast<int>(std::floor(std::log(u) / std::log1p(-q)));
    }
    case Kind::uniform: {
      const auto span = static_cast<std::uint64_t>(high - low + 1);
      return low + static_cast<int>(stream.next_u64() % span);
    }
  }
  return 1;
}

void CountDistribution::validate() const {
  switch (kind) {
    case Kind::fixed:
      if (value < 1) throw ConfigError("phase count: fixed value must be >= 1");
      break;
    case Kind::geometric:
      if (!(mean >= 1.0)) throw ConfigError("phase count: geometric mean must be >= 1");
      break;
    case Kind::uniform:
      if (low < 1 || high < low) throw ConfigError("phase count: uniform needs 1 <= low <= high");
      break;
  }
}

double SessionTemplate::expected_requests() const {
  double total = 0.0;
  for (const auto& phase : phase_plan) total += phase.count.expected();
  return total;
}

void SessionTemplate::validate(std::size_t tier_count) const {
  if (phase_plan.empty()) throw ConfigError("traffic.session.phases must not be empty");
  for (std::size_t i = 0; i < phase_plan.size(); ++i) {
    if (phase_plan[i].tier.value >= tier_count)
      throw ConfigError("traffic.session.phases[" + std::to_string(i + 1) +
                        "]: tier " + std::to_string(phase_plan[i].tier.value + 1) +
                        " does not exist");
    phase_plan[i].count.validate();
  }
  if (!(think_mean >= 0.0)) throw ConfigError("traffic.session.think_mean must be >= 0");
  if (!(think_floor > 0.0)) throw ConfigError("traffic.session.think_floor must be > 0");
  if (!(client_timeout > 0.0)) throw ConfigError("traffic.session.client_timeout must be > 0");
}

SessionRecord build_session(RandomStream& stream, const SessionTemplate& tmpl, SessionId id,
                            SimTime arrival) {
  SessionRecord s;
  s.id = id;
  s.arrival_time = arrival;
  for (const auto& phase : tmpl.phase_plan) {
    const int n = phase.count.draw(stream);
    s.request_plan.insert(s.request_plan.end(), static_cast<std::size_t>(n), phase.tier);
  }
  return s;
}

}  // namespace socsim
