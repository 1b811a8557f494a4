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

#include "hapsteer/authority.hpp"

#include <algorithm>
#include <cmath>

#include "hapsteer/errors.hpp"

namespace hapsteer {

std::string_view to_string(AssistMode m) noexcept { return m == AssistMode::LK ? "LK" : "LC"; }

void AuthorityParams::validate() const {
  if (!(lambda > 0 && gamma >= 0)) throw ConfigError("authority lambda/gamma out of range");
  if (!(K_replant > 0 && K_replant < 1)) throw ConfigError("authority K_replant must be in (0,1)");
  if (!(shifting_eps > 0 && shifting_eps < 0.5)) {
    throw ConfigError("authority shifting_eps must be in (0, 0.5)");
  }
  if (default_direction != 1 && default_direction != -1) {
    throw ConfigError("authority default_direction must be +1 or -1");
  }
}

double gain_inconsistent(double K_shifting, double t, const AuthorityParams& p) noexcept {
  return -0.5 * K_shifting * std::tanh(p.lambda * (t - p.gamma)) + 0.5 * K_shifting;
}

double gain_consistent(double K_shifting, double t, const AuthorityParams& p) noexcept {
  return 0.5 * (1.0 - K_shifting) * std::tanh(p.lambda * (t - p.gamma)) +
         0.5 * (1.0 + K_shifting);
}

AuthorityState initial_authority(const AuthorityParams& p) noexcept {
  AuthorityState a;
  a.K_shifting = 1.0 - p.shifting_eps;
  a.t_in_state = 0.0;
  a.K_h = gain_consistent(a.K_shifting, 0.0, p);
  return a;
}

AuthorityState step_gain(const AuthorityState& a, Verdict verdict_now, double dt,
                         const AuthorityParams& p) {
  if (!(dt > 0)) throw DomainError("step_gain: dt must be positive");
  AuthorityState next = a;
  if (verdict_now != a.verdict) {
    if (p.capture_shifting) {
      next.K_shifting = std::clamp(a.K_h, p.shifting_eps, 1.0 - p.shifting_eps);
    }
    next.t_in_state = 0.0;
    next.verdict = verdict_now;
  }
  next.t_in_state += dt;
  const double k = next.verdict == Verdict::Inconsistent
                       ? gain_inconsistent(next.K_shifting, next.t_in_state, p)
                       : gain_consistent(next.K_shifting, next.t_in_state, p);
  next.K_h = std::clamp(k, 0.0, 1.0);
  return next;
}

int choose_lane_change_direction(int lane, const LaneGeometry& geometry, double lateral_rate,
                                 double e_theta, int default_direction) noexcept {
  int dir = default_direction;
  if (lateral_rate != 0.0) {
    dir = lateral_rate > 0 ? 1 : -1;
  } else if (e_theta != 0.0) {
    dir = e_theta > 0 ? 1 : -1;
  }
  if (!geometry.valid_lane(lane + dir)) dir = -dir;
  return dir;
}

ModeResult step_mode(const AuthorityState& a, const ModeInputs& in, const TrajectoryPlan& plan,
                     const VehicleState& vehicle, const LaneGeometry& geometry,
                     const AuthorityParams& p) {
  ModeResult out{a, plan};

  if (out.state.mode == AssistMode::LC && vehicle.x >= out.plan.end_x()) {
    out.plan = plan_lane_keep(out.plan.lane_id, geometry);
    out.state.mode = AssistMode::LK;
    out.lc_completed = true;
  }

  if (a.verdict == Verdict::Consistent) out.state.replanned = false;

  if (a.verdict == Verdict::Inconsistent && a.K_h < p.K_replant && !a.replanned) {
    const int lane = geometry.lane_of(vehicle.y);
    out.state.replanned = true;
    // Already keeping the current lane: nothing to re-plan.
    if (out.state.mode == AssistMode::LK && out.plan.lane_id == lane) return out;
    out.plan = plan_lane_keep(lane, geometry);
    out.state.mode = AssistMode::LK;
    out.replanned_now = true;
    return out;
  }

  if (out.state.mode == AssistMode::LK && in.intent == 1 && a.verdict == Verdict::Consistent) {
    const int lane = geometry.lane_of(vehicle.y);
    int dir = choose_lane_change_direction(lane, geometry, in.lateral_rate, in.e_theta,
                                           p.default_direction);
    if (std::abs(in.head_yaw) >= p.head_threshold) {
      dir = in.head_yaw > 0 ? 1 : -1;
      if (!geometry.valid_lane(lane + dir)) dir = -dir;
    }
    const int target = lane + dir;
    if (geometry.valid_lane(target)) {
      auto lc = plan_lane_change(vehicle.x, geometry.center(lane), geometry.center(target),
                                 vehicle.v_x, in.delta_T_LC);
      if (lc) {
        lc->lane_id = target;
        out.plan = *lc;
        out.state.mode = AssistMode::LC;
        out.lc_started = true;
      }
    }
  }
  return out;
}

}  // namespace hapsteer
