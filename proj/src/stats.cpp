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

#include "socsim/stats.hpp"

#include <algorithm>

namespace socsim {

std::optional<double> percentile_nearest_rank(std::span<double> samples, double q) {
  if (samples.empty()) return std::nullopt;
  const auto n = samples.size();
  auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n) - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, n);
  auto nth = samples.begin() + static_cast<std::ptrdiff_t>(rank - 1);
  std::nth_element(samples.begin(), nth, samples.end());
  return *nth;
}

double coefficient_of_variation(std::span<const double> xs) {
  RunningMoments m;
  for (double x : xs) m.add(x);
  if (m.count() == 0 || m.mean() == 0.0) return 0.0;
  return m.stddev() / m.mean();
}

}  // namespace socsim
