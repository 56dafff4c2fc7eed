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

#include "socsim/rng.hpp"
#include "socsim/types.hpp"

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

namespace socsim {

struct RequestId {
  std::uint32_t value = 0;
  friend constexpr bool operator==(RequestId, RequestId) = default;
};

/// Time-integrated occupancy and delay totals for one tier, enough to check
/// Little's law and compare against closed-form queueing results.
struct TierCounters {
  std::uint64_t dispatched = 0;
  std::uint64_t completed = 0;
  double wait_sum = 0.0;        // queueing delay of completed requests
  double response_sum = 0.0;    // dispatch-to-completion of completed requests
  double occupancy_area = 0.0;  // integral of requests in tier over time
  double busy_area = 0.0;       // integral of busy servers over time
};

/// One tier: a shared FIFO queue in front of `server_count` identical
/// servers with exponential service times.
class TierState {
 public:
  TierState(TierIndex index, const TierSpec& spec) : index_(index), spec_(spec) {}

  [[nodiscard]] TierIndex index() const { return index_; }
  [[nodiscard]] int busy() const { return busy_; }
  [[nodiscard]] std::size_t queue_length() const { return queue_.size(); }
  [[nodiscard]] const TierCounters& counters() const { return counters_; }
  [[nodiscard]] const TierSpec& spec() const { return spec_; }

 private:
  friend class Cluster;

  void advance_to(SimTime now);

  TierIndex index_;
  TierSpec spec_;
  int busy_ = 0;
  std::deque<RequestId> queue_;
  TierCounters counters_;
  SimTime last_change_ = 0.0;
};

/// The server farm behind the dispatcher. Requests live in a slot pool and
/// are addressed by RequestId until their service completes.
class Cluster {
 public:
  struct Started {
    RequestId id;
    SimTime completion;
  };

  struct Completion {
    RequestRecord request;
    std::optional<Started> next;  // head-of-queue request that started service
  };

  explicit Cluster(const ClusterSpec& spec);

  /// Starts service immediately when a server is free, otherwise queues the
  /// request. The service time is drawn when service starts.
  std::pair<RequestId, std::optional<Started>> dispatch(SessionId session, TierIndex tier,
                                                        SimTime now,
                                                        std::vector<RandomStream>& service);

  /// Finishes the request in service, frees its server and starts the next
  /// queued request of the same tier.
  Completion complete(RequestId id, SimTime now, std::vector<RandomStream>& service);

  /// Sends the "busy" answer for a refused new session. No server time.
  void reject_session(SessionRecord& session, SimTime now);

  [[nodiscard]] const RequestRecord& request(RequestId id) const { return pool_[id.value]; }
  [[nodiscard]] const TierState& tier(TierIndex i) const { return tiers_[i.value]; }
  [[nodiscard]] std::size_t tier_count() const { return tiers_.size(); }
  [[nodiscard]] std::uint64_t rejections() const { return rejections_; }
  [[nodiscard]] std::size_t in_flight() const { return pool_.size() - free_.size(); }

  /// Brings time integrals up to `now`.
  void settle(SimTime now);

 private:
  RequestId allocate(RequestRecord r);
  SimTime start_service(TierState& tier, RequestId id, SimTime now, RandomStream& stream);

  std::vector<TierState> tiers_;
  std::vector<RequestRecord> pool_;
  std::vector<SimTime> service_start_;
  std::vector<RequestId> free_;
  std::uint64_t rejections_ = 0;
};

}  // namespace socsim
