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
#include "socsim/soc_policy.hpp"
#include "socsim/traffic.hpp"
#include "socsim/types.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace socsim {

inline constexpr int kScenarioSchemaVersion = 1;

enum class PolicyKind { always, soc, soc_base, tbac, pac, fixed };

const char* to_string(PolicyKind k);
/// Accepts "always", "soc", "soc-base", "tbac", "pac", "fixed".
std::optional<PolicyKind> parse_policy_kind(const std::string& name);

struct PolicyChoice {
  PolicyKind kind = PolicyKind::soc;
  SocConfig soc;
  TbacConfig tbac;  // empty thresholds mean "use the SLA limits"
  PacConfig pac;
  double fixed_p = 1.0;
};

struct OutputOptions {
  double sample_interval = 10.0;  // seconds between time-series rows
  bool curve_dump = true;
};

struct Scenario {
  int schema_version = kScenarioSchemaVersion;
  std::uint64_t seed = 1;
  double horizon = 0.0;
  std::optional<double> warmup;  // default: 10 SOC control periods
  ClusterSpec cluster;
  SlaSpec sla;
  TrafficProfile profile;
  SessionTemplate session;
  PolicyChoice policy;
  OutputOptions output;

  [[nodiscard]] double effective_warmup() const;
  /// Fills derived defaults (TBAC thresholds from the SLA) and checks every
  /// cross-field constraint. Throws ConfigError.
  void validate();
};

/// Builds the policy selected by the scenario. SOC variants run the idle
/// benchmark first, using `bench` as their random stream.
std::unique_ptr<AdmissionPolicy> make_policy(const Scenario& sc, RandomStream& bench);

/// Reference setup: three tiers (http, servlet, database) with 20 servers
/// each and mean service times 1 ms, 10 ms and 1 s; SLA caps 1/2/5 s; think
/// time mean 10 s with a 1 s floor; 8 s client timeout; geometric phase
/// lengths with mean 5 requests.
Scenario default_scenario();

/// Sessions per second the bottleneck tier can serve at full utilization:
/// min over tiers of servers / (mean service * mean requests to that tier).
double session_capacity(const Scenario& sc);

/// Parses a YAML scenario document. `origin` names the source in messages.
/// Errors carry "origin:line:" prefixes.
Scenario parse_scenario(const std::string& text, const std::string& origin = "<scenario>");
Scenario load_scenario(const std::string& path);

/// Applies a named parameter override (the sweepable set: arrival_rate,
/// T_AC, l_lambda, k_sigma, seed).
void apply_parameter(Scenario& sc, const std::string& name, double value);
bool is_sweep_parameter(const std::string& name);

}  // namespace socsim
