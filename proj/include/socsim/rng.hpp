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

#include <cstdint>
#include <random>
#include <vector>

namespace socsim {

/// One independent pseudo-random stream. Conversions to real numbers are
/// done by hand so draw sequences do not depend on the standard library's
/// distribution implementations.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed = 0) : engine_(seed) {}

  /// Uniform in (0, 1].
  double uniform_open_closed() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }
  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// -mean * ln(u) with u uniform in (0, 1]. Requires mean > 0.
double draw_exponential(RandomStream& stream, double mean);

/// Inverse-CDF exponential for a caller-supplied uniform, exposed for tests.
double exponential_from_uniform(double u, double mean);

/// SplitMix64 finalizer, used to derive independent stream seeds.
std::uint64_t mix_seed(std::uint64_t x);

/// Per-purpose streams. Each is seeded from the master seed and a fixed tag,
/// so one stream's draw sequence never depends on how often another is used.
struct RngStreams {
  RandomStream arrivals;
  std::vector<RandomStream> service;  // one per tier
  RandomStream think;
  RandomStream admission;
  RandomStream session_plan;
  RandomStream bench;

  RngStreams(std::uint64_t master_seed, std::size_t tier_count);
};

}  // namespace socsim
