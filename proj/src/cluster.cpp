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

#include "socsim/cluster.hpp"

#include <cassert>

namespace socsim {

void TierState::advance_to(SimTime now) {
  const double dt = now - last_change_;
  if (dt > 0.0) {
    const auto in_tier = static_cast<double>(busy_) + static_cast<double>(queue_.size());
    counters_.occupancy_area += in_tier * dt;
    counters_.busy_area += static_cast<double>(busy_) * dt;
    last_change_ = now;
  }
}

Cluster::Cluster(const ClusterSpec& spec) {
  tiers_.reserve(spec.tiers.size());
  for (std::size_t i = 0; i < spec.tiers.size(); ++i) {
    tiers_.emplace_back(TierIndex{i}, spec.tiers[i]);
  }
}

RequestId Cluster::allocate(RequestRecord r) {
  if (!free_.empty()) {
    RequestId id = free_.back();
    free_.pop_back();
    pool_[id.value] = std::move(r);
    service_start_[id.value] = 0.0;
    return id;
  }
  pool_.push_back(std::move(r));
  service_start_.push_back(0.0);
  return RequestId{static_cast<std::uint32_t>(pool_.size() - 1)};
}

SimTime Cluster::start_service(TierState& tier, RequestId id, SimTime now, RandomStream& stream) {
  auto& req = pool_[id.value];
  req.service_time = draw_exponential(stream, tier.spec_.mean_service_time);
  service_start_[id.value] = now;
  ++tier.busy_;
  return now + req.service_time;
}

std::pair<RequestId, std::optional<Cluster::Started>> Cluster::dispatch(
    SessionId session, TierIndex tier_index, SimTime now, std::vector<RandomStream>& service) {
  auto& tier = tiers_.at(tier_index.value);
  tier.advance_to(now);
  RequestRecord req;
  req.session_id = session;
  req.tier = tier_index;
  req.dispatch_time = now;
  const RequestId id = allocate(req);
  ++tier.counters_.dispatched;

  if (tier.busy_ < tier.spec_.server_count) {
    assert(tier.queue_.empty());
    const SimTime done = start_service(tier, id, now, service[tier_index.value]);
    return {id, Started{id, done}};
  }
  tier.queue_.push_back(id);
  return {id, std::nullopt};
}

Cluster::Completion Cluster::complete(RequestId id, SimTime now,
                                      std::vector<RandomStream>& service) {
  auto& req = pool_.at(id.value);
  auto& tier = tiers_.at(req.tier.value);
  tier.advance_to(now);

  Completion out;
  req.response_time = now - req.dispatch_time;
  tier.counters_.completed += 1;
  tier.counters_.response_sum += *req.response_time;
  tier.counters_.wait_sum += service_start_[id.value] - req.dispatch_time;
  out.request = req;
  --tier.busy_;
  free_.push_back(id);

  if (!tier.queue_.empty()) {
    const RequestId next = tier.queue_.front();
    tier.queue_.pop_front();
    const SimTime done = start_service(tier, next, now, service[tier.index_.value]);
    out.next = Started{next, done};
  }
  return out;
}

void Cluster::reject_session(SessionRecord& session, SimTime) {
  session.admitted = false;
  session.state = SessionState::rejected;
  ++rejections_;
}

void Cluster::settle(SimTime now) {
  for (auto& t : tiers_) t.advance_to(now);
}

}  // namespace socsim
