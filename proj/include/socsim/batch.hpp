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
#include "socsim/simulator.hpp"

#include <vector>

namespace socsim {

/// Runs independent scenarios one after another. Reference implementation
/// for `run_batch_parallel`.
std::vector<RunResult> run_batch_serial(const std::vector<Scenario>& scenarios);

/// Runs independent scenarios across OpenMP threads. Every run owns its
/// engine, streams and buffers, so results are identical to the serial
/// version and keep the input order.
std::vector<RunResult> run_batch_parallel(const std::vector<Scenario>& scenarios);

}  // namespace socsim
