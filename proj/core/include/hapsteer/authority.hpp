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

// Control-authority scheduling: the tanh gain curves that hand authority to
// the driver on inconsistency and take it back on consistency, plus the
// lane-keep / lane-change mode machine with collapse-triggered re-planning.

#include <string_view>

#include "hapsteer/consistency.hpp"
#include "hapsteer/dynamics.hpp"
#include "hapsteer/trajectory.hpp"

namespace hapsteer {

enum class AssistMode { LK, LC };

std::string_view to_string(AssistMode m) noexcept;

struct AuthorityParams {
  double lambda = 4.0;          ///< curve steepness (1/s)
  double gamma = 1.0;           ///< curve midpoint (s)
  double K_replant = 0.01;      ///< gain below which a collapse re-plan fires
  double shifting_eps = 1e-6;   ///< K_shifting is clamped into [eps, 1 - eps]
  int default_direction = +1;   ///< +1 left, -1 right
  double head_threshold = 0.3;  ///< |head yaw| that counts as a glance for direction
  /// Test hook: when false, K_shifting is not captured at a verdict switch
  /// and keeps its previous value. Breaks gain continuity on purpose.
  bool capture_shifting = true;

  void validate() const;
};

struct AuthorityState {
  double K_h = 1.0;
  double K_shifting = 1.0;
  double t_in_state = 0.0;
  Verdict verdict = Verdict::Consistent;
  AssistMode mode = AssistMode::LK;
  bool replanned = false;
};

/// Decay curve used while inconsistent:
/// -Ks/2 tanh(lambda (t - gamma)) + Ks/2.
double gain_inconsistent(double K_shifting, double t, const AuthorityParams& p) noexcept;

/// Recovery curve used while consistent:
/// (1 - Ks)/2 tanh(lambda (t - gamma)) + (1 + Ks)/2.
double gain_consistent(double K_shifting, double t, const AuthorityParams& p) noexcept;

/// Fully consistent start state (K_h on the recovery curve at t = 0 from
/// K_shifting = 1 - eps).
AuthorityState initial_authority(const AuthorityParams& p) noexcept;

/// Captures K_shifting and restarts the state clock when the verdict
/// changes, then advances the clock by dt and evaluates the curve of the
/// current verdict.
AuthorityState step_gain(const AuthorityState& a, Verdict verdict_now, double dt,
                         const AuthorityParams& p);

struct ModeInputs {
  int intent = 0;
  double delta_T_LC = 6.0;
  double lateral_rate = 0.0;  ///< dy/dt in the road frame (m/s)
  double e_theta = 0.0;
  double head_yaw = 0.0;  ///< a clear glance (|head| >= head_threshold) picks the side first
};

struct ModeResult {
  AuthorityState state;
  TrajectoryPlan plan;
  bool lc_started = false;
  bool lc_completed = false;
  bool replanned_now = false;
};

/// Direction (+1 left / -1 right) of a requested lane change from the
/// current lane: drift sign, else heading-error sign, else the default. A
/// direction that would leave the road falls back to the other neighbour.
int choose_lane_change_direction(int lane, const LaneGeometry& geometry, double lateral_rate,
                                 double e_theta, int default_direction) noexcept;

/// Mode machine for one step; call after step_gain. The verdict used is
/// a.verdict. A collapse re-plan is skipped (but still latched) when the
/// active plan already keeps the current lane.
ModeResult step_mode(const AuthorityState& a, const ModeInputs& in, const TrajectoryPlan& plan,
                     const VehicleState& vehicle, const LaneGeometry& geometry,
                     const AuthorityParams& p);

}  // namespace hapsteer
