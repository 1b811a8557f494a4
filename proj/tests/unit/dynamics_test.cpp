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

#include <cmath>

#include <gtest/gtest.h>

#include "hapsteer/dynamics.hpp"
#include "hapsteer/errors.hpp"

namespace hapsteer {
namespace {

constexpr double kDt = 1.0 / 60.0;

// Steady state of the linear 2-DOF model: solve A [v_y r]' = -b delta directly.
double oracle_steady_yaw_rate(double vx, double delta, const VehicleParams& p) {
  const double a11 = -(p.C_f + p.C_r) / (p.m * vx);
  const double a12 = (p.C_r * p.l_r - p.C_f * p.l_f) / (p.m * vx) - vx;
  const double a21 = (p.l_r * p.C_r - p.l_f * p.C_f) / (p.I_z * vx);
  const double a22 = -(p.l_f * p.l_f * p.C_f + p.l_r * p.l_r * p.C_r) / (p.I_z * vx);
  const double b1 = -p.C_f / p.m * delta;
  const double b2 = -p.l_f * p.C_f / p.I_z * delta;
  return (a11 * b2 - a21 * b1) / (a11 * a22 - a12 * a21);
}

TEST(FrontSlip, StraightCoastingIsZero) {
  VehicleState v;
  v.v_x = 20.0;
  EXPECT_EQ(front_slip_angle(v, 0.0, VehicleParams{}), 0.0);
}

TEST(FrontSlip, PureSteerInput) {
  VehicleState v;
  v.v_x = 20.0;
  EXPECT_DOUBLE_EQ(front_slip_angle(v, 0.1, VehicleParams{}), -0.1);
}

TEST(FrontSlip, LateralAndYawVelocity) {
  VehicleState v;
  v.v_x = 20.0;
  v.v_y = 0.5;
  v.r = 0.1;
  EXPECT_NEAR(front_slip_angle(v, 0.0, VehicleParams{}), 0.031, 1e-15);
}

TEST(FrontSlip, RejectsStandstill) {
  VehicleState v;
  EXPECT_THROW(front_slip_angle(v, 0.0, VehicleParams{}), DomainError);
}

TEST(Vehicle, ZeroInputEquilibriumIsExact) {
  VehicleState v;
  v.y = 1.75;
  v.v_x = 19.0;
  for (int i = 0; i < 10000; ++i) v = step_vehicle(v, 0.0, kDt, VehicleParams{});
  EXPECT_EQ(v.y, 1.75);
  EXPECT_EQ(v.psi, 0.0);
  EXPECT_EQ(v.v_y, 0.0);
  EXPECT_EQ(v.r, 0.0);
}

TEST(Vehicle, SteadyStateYawRateMatchesTwoDofModel) {
  const VehicleParams p;
  for (double vx : {10.0, 19.44, 30.0}) {
    for (double delta : {-0.02, 0.005, 0.03}) {
      VehicleState v;
      v.v_x = vx;
      for (int i = 0; i < 60 * 30; ++i) v = step_vehicle(v, delta, kDt, p);
      const double oracle = oracle_steady_yaw_rate(vx, delta, p);
      EXPECT_NEAR(v.r, oracle, 0.005 * std::abs(oracle)) << vx << " " << delta;
      EXPECT_NEAR(steady_state_yaw_rate(vx, delta, p), oracle, 1e-12 * std::abs(oracle));
    }
  }
}

TEST(Vehicle, LeftSteerTurnsLeft) {
  VehicleState v;
  v.v_x = 19.0;
  for (int i = 0; i < 120; ++i) v = step_vehicle(v, 0.01, kDt, VehicleParams{});
  EXPECT_GT(v.r, 0.0);
  EXPECT_GT(v.y, 0.0);
}

TEST(Vehicle, NonFiniteInputThrows) {
  VehicleState v;
  v.v_x = 19.0;
  EXPECT_THROW(step_vehicle(v, std::nan(""), kDt, VehicleParams{}), IntegrationError);
  EXPECT_THROW(step_vehicle(v, 0.0, 0.0, VehicleParams{}), DomainError);
  v.v_x = 0.0;
  EXPECT_THROW(step_vehicle(v, 0.0, kDt, VehicleParams{}), DomainError);
}

TEST(VehicleParams, Validation) {
  VehicleParams p;
  EXPECT_NO_THROW(p.validate());
  p.steer_ratio = 1.0;
  EXPECT_THROW(p.validate(), ConfigError);
  p = VehicleParams{};
  p.m = 0.0;
  EXPECT_THROW(p.validate(), ConfigError);
}

TEST(Column, RestStaysAtRest) {
  const SteeringState s = step_column({}, 0.0, 0.0, 0.0, kDt, ColumnParams{});
  EXPECT_EQ(s.theta_sw, 0.0);
  EXPECT_EQ(s.theta_sw_dot, 0.0);
}

TEST(Column, CancellingTorquesLeaveStateUnchanged) {
  SteeringState s;
  for (int i = 0; i < 100; ++i) s = step_column(s, 0.7, -0.7, 0.0, kDt, ColumnParams{});
  EXPECT_EQ(s.theta_sw, 0.0);
  EXPECT_EQ(s.theta_sw_dot, 0.0);
}

TEST(Column, ConstantTorqueSettlesAtStaticBalance) {
  ColumnParams c;
  for (double T : {-0.8, 0.25, 1.5}) {
    SteeringState s;
    for (int i = 0; i < 60 * 20; ++i) s = step_column(s, T, 0.0, 0.0, kDt, c);
    EXPECT_NEAR(s.theta_sw, T / c.K_Fz, 1e-9);
  }
}

TEST(Column, FreeDampedColumnNeverSpeedsUp) {
  ColumnParams c;
  c.K_Fz = 0.0;
  SteeringState s{0.3, 4.0};
  double prev = std::abs(s.theta_sw_dot);
  for (int i = 0; i < 600; ++i) {
    s = step_column(s, 0.0, 0.0, 0.0, kDt, c);
    EXPECT_LE(std::abs(s.theta_sw_dot), prev);
    prev = std::abs(s.theta_sw_dot);
  }
}

TEST(Column, CoupledStepMatchesPlainStepWithoutFriction) {
  ColumnParams c;
  c.friction_coulomb = 0.0;
  SteeringState a{0.1, -0.4};
  SteeringState b = a;
  const double alpha = -0.01;
  for (int i = 0; i < 200; ++i) {
    a = step_column_coupled(a, 0.3, -0.1, alpha, kDt, c);
    b = step_column(b, 0.3, -0.1, column_load_torque(alpha, 0.0, c), kDt, c);
  }
  EXPECT_NEAR(a.theta_sw, b.theta_sw, 1e-12);
  EXPECT_NEAR(a.theta_sw_dot, b.theta_sw_dot, 1e-12);
}

TEST(Column, CoupledStepSatisfiesImplicitEquation) {
  const ColumnParams c;
  const SteeringState s{0.05, 0.2};
  const double tau = 0.4;
  const double alpha = 0.002;
  const SteeringState n = step_column_coupled(s, tau, 0.0, alpha, kDt, c);
  const double w = n.theta_sw_dot;
  const double lhs = c.J_eq * (w - s.theta_sw_dot) +
                     kDt * (c.B_eq * w + c.friction_coulomb * std::tanh(w / c.omega_eps));
  const double rhs = kDt * (tau - c.K_Fz * s.theta_sw + c.sat_gain * alpha);
  EXPECT_NEAR(lhs, rhs, 1e-14);
}

TEST(Column, MechanicalStopHolds) {
  ColumnParams c;
  c.K_Fz = 0.0;
  SteeringState s;
  for (int i = 0; i < 6000; ++i) s = step_column(s, 5.0, 0.0, 0.0, kDt, c);
  EXPECT_EQ(s.theta_sw, c.theta_stop);
}

TEST(ColumnParams, Validation) {
  ColumnParams c;
  EXPECT_NO_THROW(c.validate());
  c.J_eq = 0.0;
  EXPECT_THROW(c.validate(), ConfigError);
}

}  // namespace
}  // namespace hapsteer
