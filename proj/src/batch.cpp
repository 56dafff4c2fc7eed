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

#include "socsim/batch.hpp"

#include <exception>

namespace socsim {

std::vector<RunResult> run_batch_serial(const std::vector<Scenario>& scenarios) {
  std::vector<RunResult> out;
  out.reserve(scenarios.size());
  for (const auto& sc : scenarios) out.push_back(run(sc));
  return out;
}

std::vector<RunResult> run_batch_parallel(const std::vector<Scenario>& scenarios) {
  std::vector<RunResult> out(scenarios.size());
  std::vector<std::exception_ptr> errors(scenarios.size());
  const auto n = static_cast<long>(scenarios.size());

#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = run(scenarios[static_cast<std::size_t>(i)]);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }

  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace socsim
