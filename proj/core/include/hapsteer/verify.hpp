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

// Canned closed-loop scenarios and invariant checks, shared by the CLI's
// verify command and the acceptance tests.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hapsteer/drive_log.hpp"
#include "hapsteer/scenario.hpp"

namespace hapsteer {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// The false lane-change episode: a lane-keeping driver, a spurious intent
/// pulse that makes the guidance start a lane change, and a driver who
/// stiffens against it for resist_s seconds.
struct EpisodeOptions {
  Condition condition{AssistStrength::Strong, 4.0};
  double force_time = 10.0;
  double resist_s = 4.0;
  double run_after = 12.0;
  std::uint64_t seed = 7;
};

struct EpisodeReport {
  DriveLog log;
  std::optional<double> guidance_onset;  ///< the spurious lane change began
  std::optional<double> switch_time;     ///< first Inconsistent verdict after onset
  std::optional<double> collapse_time;   ///< K_h first below 0.02 after the switch
  std::optional<double> back_time;       ///< first Consistent verdict after the switch
  std::optional<double> recovered_time;  ///< K_h first above 0.99 after back_time
  int replans = 0;
  int lc_starts = 0;
  double max_jump_to_inconsistent = 0.0;  ///< |dK_h| on the step of the switch
  double max_jump_to_consistent = 0.0;
  double jump_bound = 0.0;
};

/// Largest legal single-step |dK_h| at a verdict switch: the tanh(-lambda
/// gamma) endpoint plus one step of the curve slope.
double gain_jump_bound(double dt, const AuthorityParams& p) noexcept;

/// Lane-keeping-only configuration used by the episode (no scripted changes).
TrialConfig episode_config(const TrialConfig& base);

EpisodeReport run_false_lc_episode(const TrialConfig& base, const EpisodeOptions& opt = {});

/// K_h in [0, 1], non-increasing while Inconsistent and non-decreasing while
/// Consistent. Returns an empty string when it holds.
std::string check_gain_trace(const DriveLog& log);

/// Dense recomputation of the pseudo-work pair from logged signals; returns
/// the worst absolute deviation from the logged W_hapi / W_dr.
double pseudo_work_deviation(const DriveLog& log, double window_s);

struct VerifyOptions {
  std::uint64_t seed = 1;
  bool include_trials = true;  ///< full-course runs (a few seconds)
};

std::vector<CheckResult> run_verification(const TrialConfig& cfg, const VerifyOptions& opt = {});

}  // namespace hapsteer
