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

#include "socsim/window.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace socsim {

bool WindowStats::has_samples() const {
  return std::any_of(rt95.begin(), rt95.end(), [](const auto& v) { return v.has_value(); });
}

ObservationWindow::ObservationWindow(std::size_t tier_count) : tier_count_(tier_count) {}

void ObservationWindow::set_rule(double lambda_in_estimate, double lambda_star,
                                 double control_period) {
  lambda_in_estimate_ = lambda_in_estimate;
  lambda_star_ = lambda_star;
  control_period_ = control_period;
}

void ObservationWindow::restart(SimTime origin) {
  origin_ = origin;
  evict(origin);
}

namespace {

std::size_t floor_count(double x) {
  if (!(x > 0.0)) return 0;
  if (!std::isfinite(x) || x >= 1e15) return std::numeric_limits<std::size_t>::max();
  return static_cast<std::size_t>(std::floor(x));
}

}  // namespace

std::size_t ObservationWindow::capacity(SimTime now) const {
  const double t = std::max(0.0, now - origin_);
  const std::size_t by_arrivals = floor_count(lambda_in_estimate_ * t);
  const std::size_t by_limit = floor_count(lambda_star_ * control_period_);
  return std::max<std::size_t>(1, std::min(by_arrivals, by_limit));
}

void ObservationWindow::record_arrival(SimTime now) { arrivals_.push_back(now); }

void ObservationWindow::record_admission(SimTime now) {
  admissions_.push_back(now);
  evict(now);
}

void ObservationWindow::record_response(SimTime now, TierIndex tier, double rt) {
  samples_.push_back({now, tier.value, rt});
}

void ObservationWindow::evict(SimTime now) {
  const std::size_t cap = capacity(now);
  // Admissions since the origin stay available so the window can grow with t;
  // the limit term bounds retention from above.
  const auto since_origin = static_cast<std::size_t>(
      admissions_.end() - std::lower_bound(admissions_.begin(), admissions_.end(), origin_));
  const std::size_t limit = std::max<std::size_t>(1, floor_count(lambda_star_ * control_period_));
  const std::size_t keep = std::min(limit, std::max(cap, since_origin));
  while (admissions_.size() > keep) admissions_.pop_front();
  window_count_ = std::min(cap, admissions_.size());

  const SimTime keep_from = admissions_.empty() ? origin_ : admissions_.front();
  while (!arrivals_.empty() && arrivals_.front() < keep_from) arrivals_.pop_front();
  while (!samples_.empty() && samples_.front().time < keep_from) samples_.pop_front();
}

WindowStats ObservationWindow::update_stats(SimTime now) {
  evict(now);
  WindowStats s;
  s.end = now;
  s.rt95.assign(tier_count_, std::nullopt);
  if (window_count_ == 0) {
    // Nothing admitted since the origin: only the arrival rate is known.
    if (now > origin_) {
      s.start = origin_;
      s.arrivals = arrivals_.size();
      s.lambda_in = static_cast<double>(s.arrivals) / (now - origin_);
      s.has_rate_in = true;
    }
    return s;
  }

  s.start = admissions_[admissions_.size() - window_count_];
  s.sessions = window_count_;
  s.arrivals = static_cast<std::size_t>(
      arrivals_.end() - std::lower_bound(arrivals_.begin(), arrivals_.end(), s.start));
  const double span = now - s.start;
  if (span > 0.0) {
    s.valid = true;
    s.has_rate_in = true;
    s.lambda_in = static_cast<double>(s.arrivals) / span;
    s.lambda_adm = static_cast<double>(s.sessions) / span;
  }

  std::vector<std::vector<double>> per_tier(tier_count_);
  for (const auto& smp : samples_) {
    if (smp.time >= s.start) per_tier[smp.tier].push_back(smp.rt);
  }
  for (std::size_t i = 0; i < tier_count_; ++i) s.rt95[i] = percentile_nearest_rank(per_tier[i], 0.95);
  return s;
}

}  // namespace socsim
