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

#include "socsim/scenario.hpp"

namespace socsim::test {

/// Single tier, one request per session, no timeout: an M/M/c queue.
inline Scenario mmc_scenario(int servers, double mean_service, double rate, double horizon) {
  Scenario sc;
  sc.seed = 5;
  sc.horizon = horizon;
  sc.warmup = 0.0;
  sc.cluster.tiers = {{"db", servers, mean_service}};
  sc.sla.rt_limit = {1e9};
  sc.sla.lambda_min = 0.0;
  sc.sla.check_interval = 100.0;
  sc.profile = TrafficProfile::constant(rate);
  sc.session.phase_plan = {{TierIndex{0}, CountDistribution::fixed_count(1)}};
  sc.session.client_timeout = kInfinity;
  sc.policy.kind = PolicyKind::always;
  sc.output.sample_interval = 100.0;
  sc.output.curve_dump = false;
  sc.validate();
  return sc;
}

/// The default three-tier cluster with a different horizon and load.
inline Scenario three_tier(double rate, double horizon, PolicyKind policy, std::uint64_t seed = 1) {
  Scenario sc = default_scenario();
  sc.profile = TrafficProfile::constant(rate);
  sc.horizon = horizon;
  sc.policy.kind = policy;
  sc.seed = seed;
  sc.validate();
  return sc;
}

}  // namespace socsim::test
