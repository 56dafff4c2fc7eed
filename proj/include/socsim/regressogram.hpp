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

#include <cstddef>
#include <span>
#include <vector>

namespace socsim {

/// A point of the admitted-rate -> response-time curve.
struct CurvePoint {
  double lambda = 0.0;
  double rt = 0.0;
  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

/// Piecewise-linear interpolation through `knots` (sorted by lambda). Outside
/// the knot range the nearest end segment is prolonged; a single knot is a
/// constant function.
double interpolate(std::span<const CurvePoint> knots, double lambda);

/// Smallest lambda >= 0 at which the interpolated curve reaches `rt_target`.
/// Requires knots strictly increasing in both coordinates. Returns +inf when
/// the curve never reaches the target and 0 when the target lies below the
/// curve at lambda = 0.
double invert(std::span<const CurvePoint> knots, double rt_target);

/// Running statistics of one slice of the lambda axis. Merging two slices
/// combines their sufficient statistics exactly.
class SliceStats {
 public:
  SliceStats(double lo, double hi) : lo_(lo), hi_(hi) {}

  void add(double lambda, double rt);
  void absorb(const SliceStats& other);

  [[nodiscard]] double lo() const { return lo_; }
  [[nodiscard]] double hi() const { return hi_; }
  [[nodiscard]] bool covers(double lambda) const { return lambda >= lo_ && lambda < hi_; }
  [[nodiscard]] std::size_t count() const { return m_; }
  [[nodiscard]] CurvePoint barycenter() const { return {mean_lambda_, mean_rt_}; }
  [[nodiscard]] double rt_variance() const;
  /// Standard error of the RT mean relative to the mean; +inf below two samples.
  [[nodiscard]] double relative_standard_error() const;

 private:
  double lo_, hi_;
  std::size_t m_ = 0;
  double mean_lambda_ = 0.0;
  double mean_rt_ = 0.0;
  double m2_rt_ = 0.0;
};

/// Incremental regressogram for one tier: slices along the lambda axis, the
/// list of reliable barycenters, and the idle-system anchor point.
class TierCurve {
 public:
  /// Slices whose relative standard error exceeds this are left out of the list.
  static constexpr double kMaxRelativeError = 0.20;

  TierCurve(double slice_width, CurvePoint anchor);

  /// Adds a measurement to the slice covering `lambda` (creating the grid cell
  /// when needed), then merges slices until the barycenter list is
  /// increasing in both coordinates.
  void insert(double lambda, double rt);

  /// Merges adjacent reliable barycenters that break RT monotonicity.
  void aggregate();

  [[nodiscard]] const std::vector<CurvePoint>& reliable() const { return reliable_; }
  [[nodiscard]] const std::vector<SliceStats>& slices() const { return slices_; }
  [[nodiscard]] CurvePoint anchor() const { return anchor_; }
  [[nodiscard]] double slice_width() const { return width_; }

  /// Interpolation knots: the reliable list, led by the anchor whenever the
  /// anchor sits below the first barycenter.
  [[nodiscard]] std::vector<CurvePoint> knots() const;

  [[nodiscard]] double eval(double lambda) const;
  [[nodiscard]] double invert(double rt_target) const;

  /// Test hook: installs pre-built slices (sorted, disjoint) and aggregates.
  void set_slices(std::vector<SliceStats> slices);

 private:
  void rebuild_list();

  double width_;
  CurvePoint anchor_;
  std::vector<SliceStats> slices_;   // sorted by lo, disjoint
  std::vector<CurvePoint> reliable_;
  std::vector<std::size_t> reliable_slice_;  // slices_ index of each reliable_ entry
};

}  // namespace socsim
