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

#include "socsim/types.hpp"

#include <optional>
#include <vector>

namespace socsim {

/// Measurements over one SLA observation interval.
struct WindowMetrics {
  SimTime start = 0.0;
  SimTime end = 0.0;
  std::vector<std::optional<double>> rt95;  // absent when a tier had no samples
  std::size_t arrivals = 0;
  std::size_t admitted = 0;
};

/// Checks per-tier 95th percentiles against their caps and the admitted rate
/// against min(lambda_in, lambda_min). A window shorter than the check
/// interval is accepted and flagged partial.
ComplianceReport evaluate_sla(const WindowMetrics& metrics, const SlaSpec& sla);

}  // namespace socsim
