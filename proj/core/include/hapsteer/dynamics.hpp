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

// Lateral vehicle dynamics (linear single-track model) and the steering
// column that couples driver torque and haptic torque.
//
// Sign conventions: x forward, y to the left, psi counter-clockwise. A
// positive steering wheel angle steers the front wheels to the left.

namespace hapsteer {

/// Planar pose and lateral-dynamics state of the ego vehicle.
struct VehicleState {
  double x = 0.0;    ///< longitudinal position (m)
  double y = 0.0;    ///< lateral position (m), leftward positive
  double psi = 0.0;  ///< yaw angle (rad)
  double v_x = 0.0;  ///< longitudinal speed (m/s)
  double v_y = 0.0;  ///< lateral speed in the body frame (m/s)
  double r = 0.0;    ///< yaw rate (rad/s)

  bool finite() const noexcept;
};

struct SteeringState {
  double theta_sw = 0.0;      ///< steering wheel angle (rad)
  double theta_sw_dot = 0.0;  ///< steering wheel angular velocity (rad/s)

  bool finite() const noexcept;
};

/// Mid-size sedan defaults.
struct VehicleParams {
  double m = 1500.0;          ///< mass (kg)
  double I_z = 2500.0;        ///< yaw inertia (kg m^2)
  double l_f = 1.2;           ///< CG to front axle (m)
  double l_r = 1.6;           ///< CG to rear axle (m)
  double C_f = 80000.0;       ///< front cornering stiffness (N/rad)
  double C_r = 80000.0;       ///< rear cornering stiffness (N/rad)
  double steer_ratio = 16.0;  ///< steering wheel angle / road wheel angle

  double wheelbase() const noexcept { return l_f + l_r; }

  /// Understeer gradient K_us (s^2/m) of the linear model:
  /// m (l_r C_r - l_f C_f) / (l C_f C_r).
  double understeer_gradient() const noexcept;

  /// Throws ConfigError unless every field is strictly positive and
  /// steer_ratio > 1.
  void validate() const;
};

struct ColumnParams {
  double J_eq = 0.05;             ///< column inertia (kg m^2)
  double B_eq = 0.3;              ///< column damping (N m s/rad)
  double K_Fz = 1.0;              ///< steering resistance coefficient (N m/rad)
  double friction_coulomb = 0.02; ///< Coulomb friction magnitude (N m)
  double sat_gain = 30.0;         ///< self-aligning torque per rad of front slip (N m/rad)
  double omega_eps = 0.01;        ///< friction sign smoothing scale (rad/s)
  double theta_stop = 8.0;        ///< mechanical stop |theta_sw| (rad)

  void validate() const;
};

/// Front tyre slip angle alpha = (v_y + l_f r) / v_x - delta_f.
/// Throws DomainError when v_x <= 0.
double front_slip_angle(const VehicleState& v, double delta_f, const VehicleParams& p);

/// Road wheel angle produced by a steering wheel angle (rigid coupling).
inline double road_wheel_angle(double theta_sw, const VehicleParams& p) noexcept {
  return theta_sw / p.steer_ratio;
}

/// Closed-form steady-state yaw rate v_x delta / (l + K_us v_x^2).
double steady_state_yaw_rate(double v_x, double delta_f, const VehicleParams& p);

/// Advances the single-track model by dt. The velocity states (v_y, r) are
/// integrated implicitly (one 2x2 solve), then the pose is updated with the
/// new velocities. v_x is carried through unchanged; the scenario owns it.
/// Throws IntegrationError on non-finite input or output, DomainError when
/// v_x <= 0 or dt <= 0.
VehicleState step_vehicle(const VehicleState& v, double delta_f, double dt,
                          const VehicleParams& p);

/// Plant-side disturbance torque on the column: self-aligning torque from the
/// front slip plus smoothed Coulomb friction. Both oppose the current motion.
double column_load_torque(double alpha, double theta_sw_dot, const ColumnParams& c) noexcept;

/// Integrates J theta'' = tau_driver + tau_hapa - B theta' - K theta - tau_load
/// with the load supplied by the caller. Damping is treated implicitly.
/// Clamps at the mechanical stops.
SteeringState step_column(const SteeringState& s, double tau_driver, double tau_hapa,
                          double tau_load, double dt, const ColumnParams& c);

/// Same plant, but the load is evaluated from the slip angle with the friction
/// term solved at the end-of-step velocity. The smoothed friction is too stiff
/// for an explicit step at 60 Hz.
SteeringState step_column_coupled(const SteeringState& s, double tau_driver, double tau_hapa,
                                  double alpha, double dt, const ColumnParams& c);

}  // namespace hapsteer
