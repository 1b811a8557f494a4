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

#include "hapsteer/driver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hapsteer/errors.hpp"

namespace hapsteer {

void DriverParams::validate() const {
  if (!(preview_T > 0)) throw ConfigError("driver preview_T must be positive");
  if (!(reaction_delay >= 0)) throw ConfigError("driver reaction_delay must be >= 0");
  if (!(noise_std >= 0)) throw ConfigError("driver noise_std must be >= 0");
  if (!(noise_rate_hz > 0)) throw ConfigError("driver noise_rate_hz must be positive");
  if (!(arm_damping >= 0)) throw ConfigError("driver arm_damping must be >= 0");
  if (!(stiffen_factor >= 1)) throw ConfigError("driver stiffen_factor must be >= 1");
  if (!(resist_stiffness >= 0)) throw ConfigError("driver resist_stiffness must be >= 0");
  if (!(glance_lead >= 0)) throw ConfigError("driver glance_lead must be >= 0");
  if (!(head_peak >= 0 && head_peak <= 1)) throw ConfigError("driver head_peak must be in [0,1]");
  if (!(head_ramp_s > 0)) throw ConfigError("driver head_ramp_s must be positive");
  if (!(lc_duration > 0)) throw ConfigError("driver lc_duration must be positive");
}

DriverParams set_resist(DriverParams p, bool active) noexcept {
  if (active) {
    p.gain_y *= p.stiffen_factor;
    p.gain_psi *= p.stiffen_factor;
  }
  return p;
}

double tracking_torque(const VehicleState& v, const TrajectoryPlan& own_target,
                       const DriverParams& p) {
  const PreviewErrors e = preview_errors_static(v, own_target, p.preview_T);
  return p.gain_y * e.e_y + p.gain_psi * e.e_theta;
}

DriverModel::DriverModel(DriverParams params, IntentSchedule schedule, LaneGeometry geometry,
                         int start_lane, std::uint64_t seed, double dt)
    : params_(params),
      schedule_(std::move(schedule)),
      geometry_(geometry),
      dt_(dt),
      delay_line_(static_cast<std::size_t>(std::lround(params.reaction_delay / dt))) {
  params_.validate();
  if (!(dt > 0)) throw DomainError("driver: dt must be positive");
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    0x64726976u};
  rng_.seed(seq);
  std::sort(schedule_.begin(), schedule_.end(),
            [](const IntentEvent& a, const IntentEvent& b) { return a.trigger_x < b.trigger_x; });
  for (const IntentEvent& ev : schedule_) {
    if (!geometry_.valid_lane(ev.target_lane)) {
      throw ConfigError("driver: scheduled target lane " + std::to_string(ev.target_lane) +
                        " does not exist");
    }
  }
  own_target_ = plan_lane_keep(start_lane, geometry_);
  own_plan_ = own_target_;
}

double DriverModel::noise(double t) {
  const auto k = static_cast<long long>(std::floor(t * params_.noise_rate_hz + 1e-9));
  // Draw once per grid slot, skipping none, so the stream does not depend on dt.
  while (noise_index_ < k) {
    noise_value_ = normal_(rng_);
    ++noise_index_;
  }
  return params_.noise_std * noise_value_;
}

DriverOutput DriverModel::step(const VehicleState& v, const SteeringState& s, double t,
                               const TrajectoryPlan* assist_plan) {
  // Start the next scripted change once its trigger is reached.
  if (!active_event_ && next_event_ < schedule_.size() &&
      v.x >= schedule_[next_event_].trigger_x) {
    const IntentEvent& ev = schedule_[next_event_];
    const double y0 = geometry_.center(own_plan_.lane_id);
    auto lc = plan_lane_change(ev.trigger_x, y0, geometry_.center(ev.target_lane), v.v_x,
                               params_.lc_duration);
    if (lc) {
      lc->lane_id = ev.target_lane;
      own_plan_ = *lc;
      active_event_ = next_event_;
      onset_times_.push_back(t);
    }
    ++next_event_;
  }

  if (active_event_) {
    const IntentEvent& ev = schedule_[*active_event_];
    const bool matching =
        assist_plan != nullptr && assist_plan->lane_id == ev.target_lane;
    if (ev.comply_with_assist && matching && assist_plan->is_lane_change()) {
      adopted_ = true;
    }
    if (adopted_) {
      if (!matching) {
        adopted_ = false;  // guidance gave up; fall back to the own plan
      } else if (!assist_plan->is_lane_change()) {
        own_plan_ = plan_lane_keep(ev.target_lane, geometry_);
        active_event_.reset();
        adopted_ = false;
      }
    }
    if (active_event_ && !adopted_ && v.x >= own_plan_.end_x()) {
      own_plan_ = plan_lane_keep(ev.target_lane, geometry_);
      active_event_.reset();
    }
  }
  own_target_ = adopted_ && assist_plan ? *assist_plan : own_plan_;

  // Head glance: from glance_lead ahead of a pending onset until the path
  // reaches the boundary.
  double head_target = 0.0;
  if (active_event_) {
    const double mid = own_plan_.start_x + 0.5 * own_plan_.length;
    if (v.x < mid) head_target = glance_direction_ * params_.head_peak;
  } else if (next_event_ < schedule_.size() && v.v_x > 0) {
    const IntentEvent& ev = schedule_[next_event_];
    const double time_to = (ev.trigger_x - v.x) / v.v_x;
    if (time_to <= params_.glance_lead) {
      glance_direction_ = ev.target_lane > own_plan_.lane_id ? 1 : -1;
      head_target = glance_direction_ * params_.head_peak;
      if (glance_times_.size() <= next_event_) glance_times_.push_back(t);
    }
  }
  const double max_step = params_.head_peak / params_.head_ramp_s * dt_;
  head_ += std::clamp(head_target - head_, -max_step, max_step);

  const double command = tracking_torque(v, own_target_, params_);
  double delayed = command;
  if (delay_line_.capacity() > 0) {
    delayed = delay_line_.full() ? delay_line_.front() : 0.0;
    delay_line_.push_back(command);
  }

  DriverOutput out;
  out.tau_driver = delayed + noise(t) - params_.arm_damping * s.theta_sw_dot;
  if (resisting_) {
    // The stiffened share of the tracking gains acts as an undelayed reflex
    // on top of the voluntary command, with co-contraction stiffness and
    // damping on the wheel.
    const double stiff = tracking_torque(v, own_target_, set_resist(params_, true));
    out.tau_driver += stiff - command - params_.resist_stiffness * s.theta_sw -
                      (params_.stiffen_factor - 1.0) * params_.arm_damping * s.theta_sw_dot;
  }
  out.head_yaw = head_;
  return out;
}

}  // namespace hapsteer
