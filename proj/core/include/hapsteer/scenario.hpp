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

// The experiment: a straight two-lane expressway with four scripted lane
// changes, the seven assistance conditions, and the closed-loop trial that
// ties every module together.
//
// Per-step order (step i, t = i dt):
//   1. sense: push the feature sample built from the state at step i
//   2. intent: predict (or a forced pulse)
//   3. consistency: update with the torques and e_theta_dot of step i-1
//   4. authority: step_gain, then step_mode (may re-plan)
//   5. preview errors against the (possibly new) plan
//   6. controller: instruction and applied torque
//   7. driver torque and head yaw
//   8. log row i, then integrate column and vehicle to step i+1

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hapsteer/authority.hpp"
#include "hapsteer/consistency.hpp"
#include "hapsteer/controller.hpp"
#include "hapsteer/drive_log.hpp"
#include "hapsteer/driver.hpp"
#include "hapsteer/dynamics.hpp"
#include "hapsteer/intent.hpp"
#include "hapsteer/trajectory.hpp"

namespace hapsteer {

struct Condition {
  AssistStrength strength = AssistStrength::Manual;
  double delta_T_LC = 6.0;  ///< unused by Manual

  /// manual, strong-rapid, strong-normal, strong-gentle, weak-rapid, ...
  std::string name() const;

  /// Inverse of name(). Throws ConfigError for anything else.
  static Condition parse(std::string_view name);

  /// The seven assistance conditions, Manual first.
  static std::vector<Condition> table();

  bool operator==(const Condition& o) const noexcept {
    return strength == o.strength &&
           (strength == AssistStrength::Manual || delta_T_LC == o.delta_T_LC);
  }
};

struct LcEventSpec {
  double trigger_x = 0.0;
  int target_lane = 0;
  bool lead_vehicle = true;  ///< false: free change, no speed dip
  bool comply_with_assist = true;
};

/// Left, right, free left, right, starting from lane 0 (the right lane).
std::vector<LcEventSpec> default_lc_events();

struct ScenarioConfig {
  LaneGeometry geometry{};
  std::vector<LcEventSpec> events = default_lc_events();
  double deficit_min_kmh = 5.0;
  double deficit_max_kmh = 15.0;
  double ego_speed_kmh = 70.0;
  double dip_fraction = 0.5;  ///< share of the lead deficit the ego sheds before changing
  double dip_gap = 250.0;     ///< m of constant speed either side of the trigger
  double dip_ramp = 200.0;    ///< m over which the ego slows down / speeds up
  int start_lane = 0;
  double rate_hz = 60.0;
  double offroad_margin = 0.9;     ///< abort once the CG is this far past a road edge (m)
  double lc_area_buffer_s = 8.0;   ///< LC areas span this many seconds of travel around a trigger

  double dt() const noexcept { return 1.0 / rate_hz; }
  double ego_speed() const noexcept { return ego_speed_kmh / 3.6; }
  void validate() const;
};

struct CourseEvent {
  LcEventSpec spec;
  double deficit_kmh = 0.0;  ///< 0 for a free change
  double crossing_x = 0.0;   ///< where the driver's own path crosses the lane boundary
};

class Course {
 public:
  Course(ScenarioConfig cfg, std::vector<CourseEvent> events);

  const ScenarioConfig& config() const noexcept { return cfg_; }
  const LaneGeometry& geometry() const noexcept { return cfg_.geometry; }
  const std::vector<CourseEvent>& events() const noexcept { return events_; }

  /// Scripted ego speed (m/s) and its time derivative at station x.
  double speed(double x) const noexcept;
  double accel(double x) const noexcept;

  IntentSchedule intent_schedule() const;
  std::vector<double> crossings() const;

  /// [begin, end] stations excluded from lane-keeping metrics.
  std::vector<std::pair<double, double>> lc_areas() const;

 private:
  double dip_blend(double x, double trigger, double* slope) const noexcept;

  ScenarioConfig cfg_;
  std::vector<CourseEvent> events_;
};

/// Samples the lead-vehicle deficits from the seed. driver_lc_duration
/// locates the boundary crossings of the driver's own paths.
Course build_course(const ScenarioConfig& cfg, double driver_lc_duration, std::uint64_t seed);

struct PredictorSpec {
  std::string kind = "oracle";  ///< oracle | heuristic | external
  double horizon_s = 3.0;
  HeuristicThresholds heuristic{};
  std::string command;  ///< external: shell command speaking the line protocol
};

/// Everything a trial needs.
struct TrialConfig {
  VehicleParams vehicle{};
  ColumnParams column{};
  ControllerParams controller{};
  PreviewTracker::Options preview{};
  ConsistencyParams consistency{};
  AuthorityParams authority{};
  DriverParams driver{};
  ScenarioConfig scenario{};
  PredictorSpec predictor{};
  double intent_window_s = 3.0;  ///< observation window; 180 samples at 60 Hz

  void validate() const;
};

struct TrialOptions {
  /// Intent is forced to 1 for the single step at or after each time.
  std::vector<double> forced_intent_times;
  /// [t0, t1) windows during which the driver stiffens its own tracking.
  std::vector<std::pair<double, double>> resist_windows;
  /// Overrides cfg.predictor when set.
  std::shared_ptr<const IntentPredictor> predictor;
  /// Stop at this time instead of the course end (s).
  std::optional<double> stop_time;
  /// Mode-machine events: "lc_started", "lc_completed", "replanned".
  std::function<void(double t, std::string_view what)> on_event;
};

std::unique_ptr<IntentPredictor> make_predictor(const PredictorSpec& spec, const Course& course);

/// Runs one seeded trial. Throws TrialAborted when the vehicle leaves the road.
DriveLog run_trial(const Condition& condition, const TrialConfig& cfg, std::uint64_t seed,
                   const TrialOptions& options = {});

struct TrialOutcome {
  Condition condition;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
};

/// Called once per finished trial, serialised; log is empty on failure.
using TrialSink = std::function<void(const TrialOutcome&, DriveLog&& log)>;

/// Conditions x seeds, run on up to `jobs` threads. Outcomes come back in
/// condition-major order regardless of completion order.
std::vector<TrialOutcome> run_matrix(const std::vector<Condition>& conditions,
                                     const TrialConfig& cfg,
                                     const std::vector<std::uint64_t>& seeds, unsigned jobs,
                                     const TrialSink& sink);

/// Convenience overload keeping every log in memory.
std::vector<DriveLog> run_matrix(const std::vector<Condition>& conditions,
                                 const TrialConfig& cfg,
                                 const std::vector<std::uint64_t>& seeds, unsigned jobs = 1);

}  // namespace hapsteer
