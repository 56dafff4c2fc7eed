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

#include "socsim/sla.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace socsim {

const char* to_string(SessionState s) {
  switch (s) {
    case SessionState::pending: return "pending";
    case SessionState::thinking: return "thinking";
    case SessionState::waiting: return "waiting";
    case SessionState::completed: return "completed";
    case SessionState::abandoned: return "abandoned";
    case SessionState::rejected: return "rejected";
  }
  return "unknown";
}

void SlaSpec::validate() const {
  if (rt_limit.empty()) throw ConfigError("sla.rt_limit must list one limit per tier");
  for (std::size_t i = 0; i < rt_limit.size(); ++i) {
    if (!(rt_limit[i] > 0.0))
      throw ConfigError("sla.rt_limit[" + std::to_string(i + 1) + "] must be > 0");
  }
  if (!(lambda_min >= 0.0)) throw ConfigError("sla.lambda_min must be >= 0");
  if (!(check_interval > 0.0)) throw ConfigError("sla.check_interval must be > 0");
}

void ClusterSpec::validate() const {
  if (tiers.empty()) throw ConfigError("cluster.tiers must not be empty");
  for (std::size_t i = 0; i < tiers.size(); ++i) {
    if (tiers[i].server_count < 1)
      throw ConfigError("cluster tier " + std::to_string(i + 1) + ": servers must be >= 1");
    if (!(tiers[i].mean_service_time > 0.0))
      throw ConfigError("cluster tier " + std::to_string(i + 1) + ": mean_service must be > 0");
  }
}

bool ComplianceReport::all_ok() const {
  return admission_ok && std::all_of(rt_ok.begin(), rt_ok.end(), [](bool b) { return b; });
}

ComplianceReport evaluate_sla(const WindowMetrics& metrics, const SlaSpec& sla) {
  ComplianceReport r;
  r.window_start = metrics.start;
  r.window_end = metrics.end;
  const double length = metrics.end - metrics.start;
  r.partial_window = length + 1e-9 < sla.check_interval;
  const std::size_t k = sla.tier_count();
  r.rt_ok.assign(k, true);
  r.rt95.assign(k, std::nullopt);

  bool any_sample = false;
  for (std::size_t i = 0; i < k && i < metrics.rt95.size(); ++i) {
    r.rt95[i] = metrics.rt95[i];
    if (metrics.rt95[i]) {
      any_sample = true;
      r.rt_ok[i] = *metrics.rt95[i] <= sla.rt_limit[i];
    }
  }
  r.zero_samples = !any_sample && metrics.arrivals == 0;

  if (length > 0.0) {
    r.lambda_in = static_cast<double>(metrics.arrivals) / length;
    r.lambda_adm = static_cast<double>(metrics.admitted) / length;
    // Two standard deviations of a Poisson count at the guaranteed rate.
    r.admission_tolerance = 2.0 * std::sqrt(std::max(sla.lambda_min * length, 1.0)) / length;
  }
  const double floor_rate = std::min(r.lambda_in, sla.lambda_min);
  r.admission_ok = r.lambda_adm + r.admission_tolerance >= floor_rate;
  return r;
}

}  // namespace socsim
