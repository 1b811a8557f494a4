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

#include "hapsteer/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hapsteer/errors.hpp"

namespace hapsteer {

namespace {

bool all_finite(std::initializer_list<double> values) {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

SteeringState apply_stops(SteeringState s, const ColumnParams& c) {
  if (s.theta_sw > c.theta_stop) {
    s.theta_sw = c.theta_stop;
    s.theta_sw_dot = std::min(s.theta_sw_dot, 0.0);
  } else if (s.theta_sw < -c.theta_stop) {
    s.theta_sw = -c.theta_stop;
    s.theta_sw_dot = std::max(s.theta_sw_dot, 0.0);
  }
  return s;
}

}  // namespace

bool VehicleState::finite() const noexcept { return all_finite({x, y, psi, v_x, v_y, r}); }

bool SteeringState::finite() const noexcept { return all_finite({theta_sw, theta_sw_dot}); }

double VehicleParams::understeer_gradient() const noexcept {
  return m * (l_r * C_r - l_f * C_f) / (wheelbase() * C_f * C_r);
}

void VehicleParams::validate() const {
  if (!(m > 0 && I_z > 0 && l_f > 0 && l_r > 0 && C_f > 0 && C_r > 0)) {
    throw ConfigError("vehicle parameters must be strictly positive");
  }
  if (!(steer_ratio > 1.0)) {
    throw ConfigError("vehicle steer_ratio must exceed 1");
  }
}

void ColumnParams::validate() const {
  if (!(J_eq > 0)) throw ConfigError("column J_eq must be positive");
  if (!(B_eq >= 0)) throw ConfigError("column B_eq must be non-negative");
  if (!(K_Fz >= 0)) throw ConfigError("column K_Fz must be non-negative");
  if (!(friction_coulomb >= 0 && sat_gain >= 0)) {
    throw ConfigError("column friction and self-aligning gain must be non-negative");
  }
  if (!(omega_eps > 0 && theta_stop > 0)) {
    throw ConfigError("column omega_eps and theta_stop must be positive");
  }
}

double front_slip_angle(const VehicleState& v, double delta_f, const VehicleParams& p) {
  if (!(v.v_x > 0.0)) {
    throw DomainError("front_slip_angle: v_x must be positive, got " + std::to_string(v.v_x));
  }
  return (v.v_y + p.l_f * v.r) / v.v_x - delta_f;
}

double steady_state_yaw_rate(double v_x, double delta_f, const VehicleParams& p) {
  return v_x * delta_f / (p.wheelbase() + p.understeer_gradient() * v_x * v_x);
}

VehicleState step_vehicle(const VehicleState& v, double delta_f, double dt,
                          const VehicleParams& p) {
  if (!v.finite() || !std::isfinite(delta_f) || !std::isfinite(dt)) {
    throw IntegrationError("step_vehicle: non-finite input");
  }
  if (!(dt > 0.0)) throw DomainError("step_vehicle: dt must be positive");
  if (!(v.v_x > 0.0)) throw DomainError("step_vehicle: v_x must be positive");

  const double vx = v.v_x;
  const double a11 = -(p.C_f + p.C_r) / (p.m * vx);
  const double a12 = -(p.C_f * p.l_f - p.C_r * p.l_r) / (p.m * vx) - vx;
  const double a21 = -(p.l_f * p.C_f - p.l_r * p.C_r) / (p.I_z * vx);
  const double a22 = -(p.l_f * p.l_f * p.C_f + p.l_r * p.l_r * p.C_r) / (p.I_z * vx);
  const double b1 = p.C_f / p.m;
  const double b2 = p.l_f * p.C_f / p.I_z;

  // (I - dt A) x1 = x0 + dt b delta
  const double m11 = 1.0 - dt * a11;
  const double m12 = -dt * a12;
  const double m21 = -dt * a21;
  const double m22 = 1.0 - dt * a22;
  const double rhs1 = v.v_y + dt * b1 * delta_f;
  const double rhs2 = v.r + dt * b2 * delta_f;
  const double det = m11 * m22 - m12 * m21;

  VehicleState next = v;
  next.v_y = (rhs1 * m22 - m12 * rhs2) / det;
  next.r = (m11 * rhs2 - m21 * rhs1) / det;
  next.psi = v.psi + dt * next.r;
  const double c = std::cos(next.psi);
  const double s = std::sin(next.psi);
  next.x = v.x + dt * (vx * c - next.v_y * s);
  next.y = v.y + dt * (vx * s + next.v_y * c);

  if (!next.finite()) throw IntegrationError("step_vehicle: state diverged");
  return next;
}

double column_load_torque(double alpha, double theta_sw_dot, const ColumnParams& c) noexcept {
  // alpha is negative when the wheel is steered left into a straight-running
  // vehicle, so -sat_gain * alpha pushes the wheel back toward centre.
  return -c.sat_gain * alpha + c.friction_coulomb * std::tanh(theta_sw_dot / c.omega_eps);
}

SteeringState step_column(const SteeringState& s, double tau_driver, double tau_hapa,
                          double tau_load, double dt, const ColumnParams& c) {
  if (!(dt > 0.0)) throw DomainError("step_column: dt must be positive");
  if (!s.finite() || !all_finite({tau_driver, tau_hapa, tau_load})) {
    throw IntegrationError("step_column: non-finite input");
  }
  const double drive = tau_driver + tau_hapa - c.K_Fz * s.theta_sw - tau_load;
  SteeringState next;
  next.theta_sw_dot = (s.theta_sw_dot + dt * drive / c.J_eq) / (1.0 + dt * c.B_eq / c.J_eq);
  next.theta_sw = s.theta_sw + dt * next.theta_sw_dot;
  next = apply_stops(next, c);
  if (!next.finite()) throw IntegrationError("step_column: state diverged");
  return next;
}

SteeringState step_column_coupled(const SteeringState& s, double tau_driver, double tau_hapa,
                                  double alpha, double dt, const ColumnParams& c) {
  if (!(dt > 0.0)) throw DomainError("step_column_coupled: dt must be positive");
  if (!s.finite() || !all_finite({tau_driver, tau_hapa, alpha})) {
    throw IntegrationError("step_column_coupled: non-finite input");
  }
  // Solve J (w - w0) + dt (B w + F tanh(w / eps)) = dt (tau - K theta + sat alpha)
  // for the end-of-step velocity w. The residual is strictly increasing in w.
  const double forcing =
      tau_driver + tau_hapa - c.K_Fz * s.theta_sw + c.sat_gain * alpha;
  const double F = c.friction_coulomb;
  auto residual = [&](double w) {
    return c.J_eq * (w - s.theta_sw_dot) + dt * (c.B_eq * w + F * std::tanh(w / c.omega_eps)) -
           dt * forcing;
  };
  auto slope = [&](double w) {
    const double sech = 1.0 / std::cosh(w / c.omega_eps);
    return c.J_eq + dt * (c.B_eq + F * sech * sech / c.omega_eps);
  };

  // Bracket: friction contributes at most dt F in magnitude.
  const double base = (c.J_eq * s.theta_sw_dot + dt * forcing);
  const double denom = c.J_eq + dt * c.B_eq;
  double lo = (base - dt * F) / denom;
  double hi = (base + dt * F) / denom;
  double w = base / denom;
  for (int iter = 0; iter < 60; ++iter) {
    const double g = residual(w);
    if (std::abs(g) < 1e-15) break;
    if (g > 0) hi = w; else lo = w;
    double candidate = w - g / slope(w);
    if (!(candidate > lo && candidate < hi)) candidate = 0.5 * (lo + hi);
    if (std::abs(candidate - w) < 1e-15) { w = candidate; break; }
    w = candidate;
  }

  SteeringState next;
  next.theta_sw_dot = w;
  next.theta_sw = s.theta_sw + dt * w;
  next = apply_stops(next, c);
  if (!next.finite()) throw IntegrationError("step_column_coupled: state diverged");
  return next;
}

}  // namespace hapsteer
