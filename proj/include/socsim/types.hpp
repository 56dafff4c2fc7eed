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

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace socsim {

/// Seconds since simulation start.
using SimTime = double;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Zero-based tier index. Scenario files and reports use one-based numbering.
struct TierIndex {
  std::size_t value = 0;
  friend constexpr bool operator==(TierIndex, TierIndex) = default;
  friend constexpr auto operator<=>(TierIndex, TierIndex) = default;
};

struct SessionId {
  std::uint64_t value = 0;
  friend constexpr bool operator==(SessionId, SessionId) = default;
  friend constexpr auto operator<=>(SessionId, SessionId) = default;
};

/// Raised for malformed configuration. Maps to CLI exit status 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when the simulation detects a broken internal invariant, e.g. an
/// event scheduled before the current clock. Maps to CLI exit status 2.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Service level agreement: a 95th-percentile response time cap per tier, a
/// minimum guaranteed session admission rate and the period of the check.
struct SlaSpec {
  std::vector<double> rt_limit;  // seconds, one per tier
  double lambda_min = 0.0;       // sessions/second
  double check_interval = 0.0;   // seconds

  [[nodiscard]] std::size_t tier_count() const { return rt_limit.size(); }
  void validate() const;
};

struct TierSpec {
  std::string name;
  int server_count = 1;
  double mean_service_time = 0.0;  // seconds
};

struct ClusterSpec {
  std::vector<TierSpec> tiers;

  [[nodiscard]] std::size_t tier_count() const { return tiers.size(); }
  void validate() const;
};

enum class SessionState { pending, thinking, waiting, completed, abandoned, rejected };

const char* to_string(SessionState s);

[[nodiscard]] inline bool is_terminal(SessionState s) {
  return s == SessionState::completed || s == SessionState::abandoned ||
         s == SessionState::rejected;
}

struct SessionRecord {
  SessionId id;
  SimTime arrival_time = 0.0;
  bool admitted = false;
  std::vector<TierIndex> request_plan;  // full plan; next_request indexes into it
  std::size_t next_request = 0;
  SessionState state = SessionState::pending;

  [[nodiscard]] std::size_t remaining() const { return request_plan.size() - next_request; }
};

struct RequestRecord {
  SessionId session_id;
  TierIndex tier;
  SimTime dispatch_time = 0.0;
  double service_time = 0.0;
  std::optional<double> response_time;
};

/// Result of one periodic SLA check. Informational only.
struct ComplianceReport {
  SimTime window_start = 0.0;
  SimTime window_end = 0.0;
  bool partial_window = false;
  bool zero_samples = false;
  std::vector<bool> rt_ok;
  std::vector<std::optional<double>> rt95;
  bool admission_ok = true;
  double lambda_in = 0.0;
  double lambda_adm = 0.0;
  double admission_tolerance = 0.0;  // sessions/second slack on the rate test

  [[nodiscard]] bool all_ok() const;
};

}  // namespace socsim
