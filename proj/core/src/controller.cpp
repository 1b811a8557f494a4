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

#include "hapsteer/controller.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hapsteer/errors.hpp"

namespace hapsteer {

std::string_view to_string(AssistStrength s) noexcept {
  switch (s) {
    case AssistStrength::Manual: return "manual";
    case AssistStrength::Strong: return "strong";
    case AssistStrength::Weak: return "weak";
  }
  return "unknown";
}

double estimate_driver_torque(const PreviewErrors& e, double theta_sw, double alpha,
                              const ControllerGains& g) noexcept {
  return g.K_y * e.e_y + g.K_yd * e.e_theta_dot + g.K_theta * theta_sw + g.K_alpha * alpha;
}

double guidance_instruction(const SteeringState& s, double theta_ref_ddot,
                            const PreviewErrors& e, double alpha, double tau_dis_hat,
                            const ColumnParams& column, const ControllerGains& g) noexcept {
  const double tau_dr_hat = estimate_driver_torque(e, s.theta_sw, alpha, g);
  return column.J_eq * theta_ref_ddot + column.B_eq * s.theta_sw_dot +
         column.K_Fz * s.theta_sw - tau_dr_hat + tau_dis_hat;
}

double actual_haptic_torque(double tau_hapi, double K_h, AssistStrength strength,
                            double tau_max, double weak_factor) {
  if (!(K_h >= 0.0 && K_h <= 1.0)) {
    throw ContractViolation("actual_haptic_torque: K_h must lie in [0, 1], got " +
                            std::to_string(K_h));
  }
  double tau = 0.0;
  switch (strength) {
    case AssistStrength::Manual: return 0.0;
    case AssistStrength::Strong: tau = K_h * tau_hapi; break;
    case AssistStrength::Weak: tau = weak_factor * K_h * tau_hapi; break;
  }
  return std::clamp(tau, -tau_max, tau_max);
}

double reference_wheel_angle(const ReferenceSample& ref, double v_x, const VehicleParams& p) {
  const double slope2 = 1.0 + ref.dy_dx * ref.dy_dx;
  const double curvature = ref.d2y_dx2 / (slope2 * std::sqrt(slope2));
  const double delta_ff = (p.wheelbase() + p.understeer_gradient() * v_x * v_x) * curvature;
  return p.steer_ratio * delta_ff;
}

double ReferenceAccel::update(double theta_ref, double dt) noexcept {
  double out = 0.0;
  if (count_ >= 2) out = (theta_ref - 2.0 * prev1_ + prev2_) / (dt * dt);
  prev2_ = prev1_;
  prev1_ = theta_ref;
  count_ = std::min(count_ + 1, 2);
  return out;
}

TorqueBreakdown HapticController::step(const VehicleState& v, const SteeringState& s,
                                       const PreviewErrors& e, const TrajectoryPlan& plan,
                                       double K_h, AssistStrength strength, double dt) {
  const double alpha = front_slip_angle(v, road_wheel_angle(s.theta_sw, vehicle_), vehicle_);

  double theta_ref_ddot = 0.0;
  const double theta_ref = reference_wheel_angle(eval(plan, v.x), v.v_x, vehicle_);
  const double accel = accel_.update(theta_ref, dt);
  if (params_.use_reference_accel) theta_ref_ddot = accel;

  double stiffness_input = s.theta_sw;
  if (params_.heading_error_stiffness) stiffness_input = e.e_theta;

  TorqueBreakdown out;
  out.tau_dis_hat =
      params_.disturbance_mismatch * column_load_torque(alpha, s.theta_sw_dot, column_);
  out.tau_dr_hat = estimate_driver_torque(e, stiffness_input, alpha, params_.gains);
  out.tau_hapi = column_.J_eq * theta_ref_ddot + column_.B_eq * s.theta_sw_dot +
                 column_.K_Fz * s.theta_sw - out.tau_dr_hat + out.tau_dis_hat;
  out.tau_hapa =
      actual_haptic_torque(out.tau_hapi, K_h, strength, params_.tau_max, params_.weak_factor);
  return out;
}

}  // namespace hapsteer
