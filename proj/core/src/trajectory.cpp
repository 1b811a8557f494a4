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

#include "hapsteer/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hapsteer/errors.hpp"

namespace hapsteer {

namespace {

// de Casteljau on an arbitrary number of scalar ordinates.
template <std::size_t N>
double de_casteljau(std::array<double, N> b, double t) {
  for (std::size_t level = N - 1; level > 0; --level) {
    for (std::size_t i = 0; i < level; ++i) {
      b[i] = (1.0 - t) * b[i] + t * b[i + 1];
    }
  }
  return b[0];
}

}  // namespace

int LaneGeometry::lane_of(double y) const noexcept {
  const int lane = static_cast<int>(std::floor(y / lane_width));
  return std::clamp(lane, 0, lane_count - 1);
}

void LaneGeometry::validate() const {
  if (!(lane_width > 0)) throw ConfigError("lane_width must be positive");
  if (lane_count < 2) throw ConfigError("lane_count must be at least 2");
  if (!(course_length > 0)) throw ConfigError("course_length must be positive");
}

std::optional<TrajectoryPlan> plan_lane_change(double x_now, double y_now,
                                               double target_lane_center, double v_x,
                                               double delta_T_LC) {
  if (!(v_x > 0.0)) throw DomainError("plan_lane_change: v_x must be positive");
  if (!(delta_T_LC > 0.0)) throw DomainError("plan_lane_change: delta_T_LC must be positive");
  if (std::abs(target_lane_center - y_now) < 1e-9) return std::nullopt;

  TrajectoryPlan plan;
  plan.mode = PlanMode::LaneChange;
  plan.start_x = x_now;
  plan.length = v_x * delta_T_LC;
  plan.y_start = y_now;
  plan.y_end = target_lane_center;
  for (std::size_t i = 0; i < plan.control_points.size(); ++i) {
    plan.control_points[i].x = x_now + plan.length * static_cast<double>(i) / 5.0;
    plan.control_points[i].y = i < 3 ? y_now : target_lane_center;
  }
  return plan;
}

TrajectoryPlan plan_lane_keep(int lane_id, const LaneGeometry& geometry) {
  if (!geometry.valid_lane(lane_id)) {
    throw ContractViolation("plan_lane_keep: invalid lane " + std::to_string(lane_id));
  }
  TrajectoryPlan plan;
  plan.mode = PlanMode::LaneKeep;
  plan.lane_id = lane_id;
  plan.y_start = plan.y_end = geometry.center(lane_id);
  return plan;
}

ReferenceSample eval(const TrajectoryPlan& plan, double x) {
  ReferenceSample out;
  if (!plan.is_lane_change()) {
    out.y_ref = plan.y_end;
    return out;
  }
  if (x <= plan.start_x) {
    out.y_ref = plan.y_start;
    return out;
  }
  if (x >= plan.end_x()) {
    out.y_ref = plan.y_end;
    return out;
  }

  // Evenly spaced abscissae make x(t) linear, so t follows directly from x.
  const double t = (x - plan.start_x) / plan.length;
  std::array<double, 6> b{};
  for (std::size_t i = 0; i < 6; ++i) b[i] = plan.control_points[i].y;
  std::array<double, 5> d1{};
  for (std::size_t i = 0; i < 5; ++i) d1[i] = 5.0 * (b[i + 1] - b[i]);
  std::array<double, 4> d2{};
  for (std::size_t i = 0; i < 4; ++i) d2[i] = 4.0 * (d1[i + 1] - d1[i]);

  const double L = plan.length;
  out.y_ref = de_casteljau(b, t);
  out.dy_dx = de_casteljau(d1, t) / L;
  out.d2y_dx2 = de_casteljau(d2, t) / (L * L);
  out.heading_ref = std::atan(out.dy_dx);
  return out;
}

double wrap_angle(double a) noexcept {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a, two_pi);
  if (a <= -std::numbers::pi) a += two_pi;
  if (a > std::numbers::pi) a -= two_pi;
  return a;
}

PreviewErrors preview_errors_static(const VehicleState& v, const TrajectoryPlan& plan,
                                    double T_preview, bool heading_at_vehicle) {
  if (!(v.v_x > 0.0)) throw DomainError("preview_errors: v_x must be positive");
  const double Lp = v.v_x * T_preview;
  const double xp = v.x + Lp * std::cos(v.psi);
  const double yp = v.y + Lp * std::sin(v.psi);
  const ReferenceSample ref = eval(plan, xp);
  PreviewErrors e;
  e.e_y = ref.y_ref - yp;
  const double heading = heading_at_vehicle ? eval(plan, v.x).heading_ref : ref.heading_ref;
  e.e_theta = wrap_angle(heading - v.psi);
  return e;
}

PreviewErrors PreviewTracker::update(const VehicleState& v, const TrajectoryPlan& plan,
                                     double dt) {
  PreviewErrors e = preview_errors_static(v, plan, opt_.T_preview, opt_.heading_at_vehicle);
  double raw = 0.0;
  if (has_prev_) raw = wrap_angle(e.e_theta - prev_e_theta_) / dt;
  if (opt_.lowpass) {
    const double tau = 1.0 / (2.0 * std::numbers::pi * opt_.cutoff_hz);
    const double a = dt / (dt + tau);
    filtered_ = has_prev_ ? filtered_ + a * (raw - filtered_) : filtered_ * (1.0 - a);
  } else {
    filtered_ = raw;
  }
  e.e_theta_dot = filtered_;
  prev_e_theta_ = e.e_theta;
  has_prev_ = true;
  return e;
}

}  // namespace hapsteer
