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

// Simulated drivers that close the loop. The driver steers toward its OWN
// target trajectory through a delayed, noisy preview-point law; when that
// target differs from the guidance plan the two agents fight, which is what
// the consistency detector is meant to notice.

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include <boost/circular_buffer.hpp>

#include "hapsteer/dynamics.hpp"
#include "hapsteer/trajectory.hpp"

namespace hapsteer {

struct DriverParams {
  double gain_y = 0.15;          ///< N m per m of preview lateral error
  double gain_psi = 3.6;         ///< N m per rad of preview heading error
  double preview_T = 0.7;        ///< s
  double reaction_delay = 0.2;   ///< s, pure delay on the tracking command
  double noise_std = 0.3;        ///< N m, white torque noise
  double noise_rate_hz = 60.0;   ///< noise is held between draws on this grid
  double arm_damping = 0.14;     ///< N m s/rad, passive (undelayed) arm impedance
  double stiffen_factor = 12.0;  ///< gain multiplier while overruling
  double resist_stiffness = 40.0; ///< N m/rad, co-contraction holding the wheel while overruling
  double glance_lead = 1.5;      ///< s of head yaw before own steering onset
  double head_peak = 0.7;        ///< normalised head yaw during a glance
  double head_ramp_s = 0.5;      ///< time to ramp the head between 0 and peak
  double lc_duration = 6.0;      ///< s, the driver's own lane-change duration

  void validate() const;
};

struct IntentEvent {
  double trigger_x = 0.0;  ///< own lane change starts here (m)
  int target_lane = 0;
  bool comply_with_assist = true;  ///< adopt a matching guidance plan while changing
};

using IntentSchedule = std::vector<IntentEvent>;

/// Tracking gains multiplied by stiffen_factor while active. DriverModel
/// applies the added share without the reaction delay.
DriverParams set_resist(DriverParams p, bool active) noexcept;

/// Undelayed, noise-free preview law toward own_target.
double tracking_torque(const VehicleState& v, const TrajectoryPlan& own_target,
                       const DriverParams& p);

struct DriverOutput {
  double tau_driver = 0.0;
  double head_yaw = 0.0;
};

class DriverModel {
 public:
  DriverModel(DriverParams params, IntentSchedule schedule, LaneGeometry geometry,
              int start_lane, std::uint64_t seed, double dt);

  /// One step. assist_plan is the guidance plan the driver can feel, or
  /// nullptr when no haptic torque is applied (Manual).
  DriverOutput step(const VehicleState& v, const SteeringState& s, double t,
                    const TrajectoryPlan* assist_plan);

  void set_resisting(bool active) noexcept { resisting_ = active; }
  bool resisting() const noexcept { return resisting_; }

  const TrajectoryPlan& own_target() const noexcept { return own_target_; }

  /// Times at which the driver's own lane changes began.
  const std::vector<double>& onset_times() const noexcept { return onset_times_; }
  /// Times at which the head first left zero ahead of each change.
  const std::vector<double>& glance_times() const noexcept { return glance_times_; }

 private:
  double noise(double t);

  DriverParams params_;
  IntentSchedule schedule_;
  LaneGeometry geometry_;
  double dt_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  long long noise_index_ = -1;
  double noise_value_ = 0.0;
  boost::circular_buffer<double> delay_line_;

  TrajectoryPlan own_target_;
  TrajectoryPlan own_plan_;
  std::size_t next_event_ = 0;
  std::optional<std::size_t> active_event_;
  bool adopted_ = false;
  bool resisting_ = false;
  double head_ = 0.0;
  int glance_direction_ = 0;
  bool glance_logged_ = false;
  std::vector<double> onset_times_;
  std::vector<double> glance_times_;
};

}  // namespace hapsteer
