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

#include "socsim/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace socsim {

std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double exponential_from_uniform(double u, double mean) { return -mean * std::log(u); }

double draw_exponential(RandomStream& stream, double mean) {
  if (!(mean > 0.0)) throw std::invalid_argument("draw_exponential: mean must be > 0");
  double x = exponential_from_uniform(stream.uniform_open_closed(), mean);
  // u == 1 yields exactly 0; keep samples strictly positive.
  return x > 0.0 ? x : mean * 0x1.0p-53;
}

namespace {

enum class StreamTag : std::uint64_t {
  arrivals = 1,
  think = 2,
  admission = 3,
  session_plan = 4,
  bench = 5,
  service_base = 100,
};

RandomStream make_stream(std::uint64_t master, std::uint64_t tag) {
  return RandomStream(mix_seed(mix_seed(master) ^ mix_seed(tag)));
}

RandomStream make_stream(std::uint64_t master, StreamTag tag) {
  return make_stream(master, static_cast<std::uint64_t>(tag));
}

}  // namespace

RngStreams::RngStreams(std::uint64_t master_seed, std::size_t tier_count)
    : arrivals(make_stream(master_seed, StreamTag::arrivals)),
      think(make_stream(master_seed, StreamTag::think)),
      admission(make_stream(master_seed, StreamTag::admission)),
      session_plan(make_stream(master_seed, StreamTag::session_plan)),
      bench(make_stream(master_seed, StreamTag::bench)) {
  service.reserve(tier_count);
  for (std::size_t i = 0; i < tier_count; ++i) {
    service.push_back(
        make_stream(master_seed, static_cast<std::uint64_t>(StreamTag::service_base) + i));
  }
}

}  // namespace socsim
