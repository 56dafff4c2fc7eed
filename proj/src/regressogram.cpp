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

#include "socsim/regressogram.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace socsim {

double interpolate(std::span<const CurvePoint> knots, double lambda) {
  if (knots.empty()) return 0.0;
  if (knots.size() == 1) return knots.front().rt;
  std::size_t j = 0;  // segment [j, j+1]
  if (lambda >= knots.back().lambda) {
    j = knots.size() - 2;
  } else if (lambda > knots.front().lambda) {
    auto it = std::upper_bound(knots.begin(), knots.end(), lambda,
                               [](double v, const CurvePoint& p) { return v < p.lambda; });
    j = static_cast<std::size_t>(it - knots.begin()) - 1;
  }
  const auto& a = knots[j];
  const auto& b = knots[j + 1];
  if (lambda == a.lambda) return a.rt;
  if (lambda == b.lambda) return b.rt;
  const double slope = (b.rt - a.rt) / (b.lambda - a.lambda);
  return std::max(0.0, a.rt + slope * (lambda - a.lambda));
}

double invert(std::span<const CurvePoint> knots, double rt_target) {
  if (knots.empty()) return kInfinity;
  if (knots.size() == 1) return rt_target >= knots.front().rt ? kInfinity : 0.0;

  const auto& first = knots.front();
  if (rt_target < first.rt) {
    const auto& second = knots[1];
    const double slope = (second.rt - first.rt) / (second.lambda - first.lambda);
    if (!(slope > 0.0)) return 0.0;
    return std::max(0.0, first.lambda - (first.rt - rt_target) / slope);
  }
  for (std::size_t j = 0; j + 1 < knots.size(); ++j) {
    const auto& a = knots[j];
    const auto& b = knots[j + 1];
    if (rt_target == a.rt) return a.lambda;
    if (rt_target <= b.rt) {
      return a.lambda + (rt_target - a.rt) * (b.lambda - a.lambda) / (b.rt - a.rt);
    }
  }
  const auto& a = knots[knots.size() - 2];
  const auto& b = knots.back();
  const double slope = (b.rt - a.rt) / (b.lambda - a.lambda);
  if (!(slope > 0.0)) return kInfinity;
  return b.lambda + (rt_target - b.rt) / slope;
}

void SliceStats::add(double lambda, double rt) {
  ++m_;
  const double n = static_cast<double>(m_);
  mean_lambda_ += (lambda - mean_lambda_) / n;
  const double delta = rt - mean_rt_;
  mean_rt_ += delta / n;
  m2_rt_ += delta * (rt - mean_rt_);
}

void SliceStats::absorb(const SliceStats& other) {
  lo_ = std::min(lo_, other.lo_);
  hi_ = std::max(hi_, other.hi_);
  if (other.m_ == 0) return;
  if (m_ == 0) {
    m_ = other.m_;
    mean_lambda_ = other.mean_lambda_;
    mean_rt_ = other.mean_rt_;
    m2_rt_ = other.m2_rt_;
    return;
  }
  const double na = static_cast<double>(m_);
  const double nb = static_cast<double>(other.m_);
  const double n = na + nb;
  const double delta = other.mean_rt_ - mean_rt_;
  mean_lambda_ = (na * mean_lambda_ + nb * other.mean_lambda_) / n;
  mean_rt_ = (na * mean_rt_ + nb * other.mean_rt_) / n;
  m2_rt_ += other.m2_rt_ + delta * delta * na * nb / n;
  m_ += other.m_;
}

double SliceStats::rt_variance() const {
  return m_ < 2 ? 0.0 : std::max(0.0, m2_rt_ / static_cast<double>(m_ - 1));
}

double SliceStats::relative_standard_error() const {
  if (m_ < 2) return kInfinity;
  const double se = std::sqrt(rt_variance() / static_cast<double>(m_));
  if (se == 0.0) return 0.0;
  if (mean_rt_ <= 0.0) return kInfinity;
  return se / mean_rt_;
}

TierCurve::TierCurve(double slice_width, CurvePoint anchor) : width_(slice_width), anchor_(anchor) {
  assert(slice_width > 0.0);
}

void TierCurve::insert(double lambda, double rt) {
  auto it = std::upper_bound(slices_.begin(), slices_.end(), lambda,
                             [](double v, const SliceStats& s) { return v < s.lo(); });
  if (it != slices_.begin() && std::prev(it)->covers(lambda)) {
    std::prev(it)->add(lambda, rt);
  } else {
    double k = std::floor(lambda / width_);
    if (lambda < k * width_) k -= 1.0;
    if (lambda >= (k + 1.0) * width_) k += 1.0;
    SliceStats cell(k * width_, (k + 1.0) * width_);
    cell.add(lambda, rt);
    slices_.insert(it, cell);
  }
  aggregate();
}

void TierCurve::rebuild_list() {
  reliable_.clear();
  reliable_slice_.clear();
  for (std::size_t s = 0; s < slices_.size(); ++s) {
    if (slices_[s].relative_standard_error() <= kMaxRelativeError) {
      reliable_.push_back(slices_[s].barycenter());
      reliable_slice_.push_back(s);
    }
  }
}

void TierCurve::aggregate() {
  for (;;) {
    rebuild_list();
    std::size_t bad = reliable_.size();
    for (std::size_t j = 0; j + 1 < reliable_.size(); ++j) {
      if (!(reliable_[j + 1].rt > reliable_[j].rt)) {
        bad = j;
        break;
      }
    }
    if (bad == reliable_.size()) break;
    // Merge every slice between the two offending barycenters, including
    // unreliable ones in the gap, so intervals stay contiguous.
    const std::size_t from = reliable_slice_[bad];
    const std::size_t to = reliable_slice_[bad + 1];
    for (std::size_t s = from + 1; s <= to; ++s) slices_[from].absorb(slices_[s]);
    slices_.erase(slices_.begin() + static_cast<std::ptrdiff_t>(from + 1),
                  slices_.begin() + static_cast<std::ptrdiff_t>(to + 1));
  }
}

std::vector<CurvePoint> TierCurve::knots() const {
  std::vector<CurvePoint> k;
  k.reserve(reliable_.size() + 1);
  if (reliable_.empty() ||
      (anchor_.lambda < reliable_.front().lambda && anchor_.rt < reliable_.front().rt)) {
    k.push_back(anchor_);
  }
  k.insert(k.end(), reliable_.begin(), reliable_.end());
  return k;
}

double TierCurve::eval(double lambda) const {
  const auto k = knots();
  return interpolate(k, lambda);
}

double TierCurve::invert(double rt_target) const {
  const auto k = knots();
  return socsim::invert(k, rt_target);
}

void TierCurve::set_slices(std::vector<SliceStats> slices) {
  slices_ = std::move(slices);
  aggregate();
}

}  // namespace socsim
