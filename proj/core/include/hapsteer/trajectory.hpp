// Copyright 2026 The hapsteer Authors. All Rights Reserved.
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

#include <array>
#include <optional>

#include "hapsteer/dynamics.hpp"

namespace hapsteer {

/// Straight multi-lane road. y = 0 is the right road edge and y grows to the
/// left, so lane 0 is the rightmost lane with centre d/2.
struct LaneGeometry {
  double lane_width = 3.5;
  int lane_count = 2;
  double course_length = 8000.0;

  double center(int lane) const noexcept { return (lane + 0.5) * lane_width; }
  double road_width() const noexcept { return lane_count * lane_width; }
  bool valid_lane(int lane) const noexcept { return lane >= 0 && lane < lane_count; }

  /// Lane containing y, clamped into [0, lane_count).
  int lane_of(double y) const noexcept;

  void validate() const;
};

enum class PlanMode { LaneKeep, LaneChange };

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Guidance target. In LaneKeep mode only lane_id and y_end (the centreline)
/// are meaningful. In LaneChange mode the curve is a quintic Bezier with
/// control points evenly spaced in x over [start_x, start_x + length].
struct TrajectoryPlan {
  PlanMode mode = PlanMode::LaneKeep;
  int lane_id = 0;  ///< LK: lane being kept. LC: target lane.
  double start_x = 0.0;
  double length = 0.0;
  double y_start = 0.0;
  double y_end = 0.0;
  std::array<Point2, 6> control_points{};

  bool is_lane_change() const noexcept { return mode == PlanMode::LaneChange; }
  double end_x() const noexcept { return start_x + length; }
};

/// Reference evaluated at a longitudinal station.
struct ReferenceSample {
  double y_ref = 0.0;
  double heading_ref = 0.0;  ///< atan(dy/dx)
  double dy_dx = 0.0;
  double d2y_dx2 = 0.0;
};

struct PreviewErrors {
  double e_y = 0.0;          ///< target minus preview point lateral (m); > 0 means target is to the left
  double e_theta = 0.0;      ///< heading_ref - psi (rad), wrapped to (-pi, pi]
  double e_theta_dot = 0.0;  ///< rad/s
};

/// Lane-change plan of length v_x * delta_T_LC from (x_now, y_now) to
/// target_lane_center. Returns nullopt when the target lies within 1e-9 m of
/// y_now (nothing to change). Throws DomainError when v_x or delta_T_LC is
/// not positive.
std::optional<TrajectoryPlan> plan_lane_change(double x_now, double y_now,
                                               double target_lane_center, double v_x,
                                               double delta_T_LC);

/// Constant-centreline plan for lane_id. Throws ContractViolation for an
/// invalid lane.
TrajectoryPlan plan_lane_keep(int lane_id, const LaneGeometry& geometry);

ReferenceSample eval(const TrajectoryPlan& plan, double x);

/// Wraps an angle into (-pi, pi].
double wrap_angle(double a) noexcept;

/// Reference position and heading at the preview point, and the raw errors
/// without the derivative term.
/// With heading_at_vehicle the reference tangent is taken at the vehicle's
/// own station instead of at the preview point.
PreviewErrors preview_errors_static(const VehicleState& v, const TrajectoryPlan& plan,
                                    double T_preview, bool heading_at_vehicle = false);

/// Holds the one-sample memory needed for the heading-error derivative and
/// its optional first-order low-pass filter.
class PreviewTracker {
 public:
  struct Options {
    double T_preview = 1.0;
    bool lowpass = true;
    double cutoff_hz = 10.0;
    bool heading_at_vehicle = true;
  };

  PreviewTracker() = default;
  explicit PreviewTracker(Options opt) : opt_(opt) {}

  /// Errors for this step. e_theta_dot is the backward difference against the
  /// previous call (zero on the first call), optionally low-pass filtered.
  PreviewErrors update(const VehicleState& v, const TrajectoryPlan& plan, double dt);

  /// Forget the previous heading error, so a reference switch (new plan) does
  /// not show up as a derivative spike.
  void reset_memory() noexcept { has_prev_ = false; }

  const Options& options() const noexcept { return opt_; }

 private:
  Options opt_{};
  bool has_prev_ = false;
  double prev_e_theta_ = 0.0;
  double filtered_ = 0.0;
};

}  // namespace hapsteer
