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

// Haptic guidance torque: the column-impedance instruction law, the
// single-preview-point driver torque estimate it subtracts, and the gain /
// strength scaling that turns the instruction into the applied torque.

#include <optional>
#include <string_view>

#include "hapsteer/dynamics.hpp"
#include "hapsteer/trajectory.hpp"

namespace hapsteer {

/// Gains of the driver-torque estimate. The estimate is linear in the preview
/// errors, whose sign convention is target-minus-vehicle, so a stabilising
/// set carries a negative K_y.
struct ControllerGains {
  double K_y = -3.4;     ///< N m / m
  double K_yd = 14.0;    ///< N m s / rad
  double K_theta = 12.0; ///< N m / rad
  double K_alpha = -3.6; ///< N m / rad
};

enum class AssistStrength { Manual, Strong, Weak };

std::string_view to_string(AssistStrength s) noexcept;

struct ControllerParams {
  ControllerGains gains{};
  double tau_max = 5.0;             ///< saturation of the applied torque (N m)
  double weak_factor = 0.4;         ///< torque scale of the Weak condition
  bool use_reference_accel = true;  ///< false zeroes the inertial feed-forward term
  double disturbance_mismatch = 1.0;  ///< scale on the disturbance compensation
  /// Substitute the heading error for the wheel angle in the K_theta term.
  bool heading_error_stiffness = false;
};

struct TorqueBreakdown {
  double tau_hapi = 0.0;     ///< guidance instruction
  double tau_dr_hat = 0.0;   ///< estimated driver torque
  double tau_dis_hat = 0.0;  ///< disturbance compensation
  double tau_hapa = 0.0;     ///< applied haptic torque
};

/// K_y e_y + K_yd e_theta_dot + K_theta theta_sw + K_alpha alpha.
double estimate_driver_torque(const PreviewErrors& e, double theta_sw, double alpha,
                              const ControllerGains& g) noexcept;

/// J theta_ref'' + B theta' + K theta - tau_dr_hat + tau_dis_hat.
double guidance_instruction(const SteeringState& s, double theta_ref_ddot,
                            const PreviewErrors& e, double alpha, double tau_dis_hat,
                            const ColumnParams& column, const ControllerGains& g) noexcept;

/// Manual -> 0; Strong -> K_h tau_hapi; Weak -> weak_factor K_h tau_hapi;
/// then clamps to [-tau_max, tau_max]. Throws ContractViolation when K_h is
/// outside [0, 1].
double actual_haptic_torque(double tau_hapi, double K_h, AssistStrength strength,
                            double tau_max, double weak_factor = 0.4);

/// Reference wheel angle from curvature feed-forward: steer_ratio times the
/// steady-state road-wheel angle that holds the plan's curvature at v_x.
double reference_wheel_angle(const ReferenceSample& ref, double v_x, const VehicleParams& p);

/// Second backward difference of the reference wheel angle.
class ReferenceAccel {
 public:
  double update(double theta_ref, double dt) noexcept;
  void reset() noexcept { count_ = 0; }

 private:
  int count_ = 0;
  double prev1_ = 0.0;
  double prev2_ = 0.0;
};

/// Stateful per-simulation controller: owns the reference-acceleration
/// differentiator and evaluates the full torque chain for one step.
class HapticController {
 public:
  HapticController(ControllerParams params, ColumnParams column, VehicleParams vehicle)
      : params_(params), column_(column), vehicle_(vehicle) {}

  TorqueBreakdown step(const VehicleState& v, const SteeringState& s, const PreviewErrors& e,
                       const TrajectoryPlan& plan, double K_h, AssistStrength strength,
                       double dt);

  void reset_reference() noexcept { accel_.reset(); }
  const ControllerParams& params() const noexcept { return params_; }

 private:
  ControllerParams params_;
  ColumnParams column_;
  VehicleParams vehicle_;
  ReferenceAccel accel_;
};

}  // namespace hapsteer
