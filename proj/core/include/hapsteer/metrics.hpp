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

// Evaluation battery over finished drive logs: lateral stability and
// steering activity on lane-keeping stretches, yaw-based lane-change
// segmentation with per-change measures, and grouped summaries.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hapsteer/drive_log.hpp"
#include "hapsteer/trajectory.hpp"

namespace hapsteer {

struct MetricsParams {
  double swrr_gap_deg = 3.0;
  double psi_on_deg = 0.5;
  double psi_off_deg = 0.2;
  double overshoot_window_s = 3.0;

  void validate() const;
};

/// Sample standard deviation (N - 1). Throws DomainError for fewer than two
/// samples.
double sdlp(std::span<const double> lateral_positions);

/// Indices of the stationary points used for reversal counting: the first
/// sample and every interior direction change (a plateau counts at its last
/// sample). The trailing sample is never included.
std::vector<std::size_t> stationary_points(std::span<const double> theta);

/// Upward plus downward reversals whose excursion is at least gap.
std::size_t count_reversals(std::span<const double> theta, double gap);

/// Reversals per minute. Throws DomainError when duration_s <= 0.
double swrr(std::span<const double> theta_sw, double gap_rad, double duration_s);

struct LcSegment {
  double start_t = 0.0;
  double end_t = 0.0;
  int direction = 0;  ///< +1 left, -1 right
  std::size_t begin = 0;  ///< first record index
  std::size_t end = 0;    ///< last record index (inclusive)
  int from_lane = 0;
  int to_lane = 0;
  bool truncated = false;  ///< still open at the end of the log
};

std::vector<LcSegment> segment_lc(const DriveLog& log, const LaneGeometry& geometry,
                                  const MetricsParams& p = {});

struct OvershootResult {
  double value = 0.0;
  bool truncated = false;  ///< settling window cut short by the end of the log
};

OvershootResult overshoot(const DriveLog& log, const LcSegment& seg, double target_center,
                          double window_s = 3.0);

struct LcStats {
  double duration = 0.0;
  double rms_steer_vel = 0.0;
  double peak_angle = 0.0;
};

LcStats lc_stats(const DriveLog& log, const LcSegment& seg);

/// Throws DomainError for an empty log.
double driver_torque_rms(const DriveLog& log);

using StationRange = std::pair<double, double>;

/// Maximal index runs [first, last) that lie outside every LC area (by x)
/// and every LC segment (by index).
std::vector<std::pair<std::size_t, std::size_t>> lane_keep_runs(
    const DriveLog& log, const std::vector<StationRange>& lc_areas,
    const std::vector<LcSegment>& segments);

struct LcMeasure {
  LcSegment segment;
  LcStats stats;
  OvershootResult overshoot;
};

struct TrialReport {
  std::string condition;
  std::uint64_t seed = 0;
  double sdlp = 0.0;  ///< mean over lane-keeping runs
  double swrr = 0.0;  ///< over all lane-keeping runs together
  double driver_torque_rms = 0.0;
  std::size_t lk_samples = 0;
  std::vector<LcMeasure> lane_changes;
};

TrialReport evaluate_trial(const DriveLog& log, const LaneGeometry& geometry,
                           const std::vector<StationRange>& lc_areas,
                           const MetricsParams& p = {});

enum class Grouping { Condition, Strength, Duration };

/// Group label of a condition name under g ("strong-rapid" -> "strong" or
/// "rapid"). Manual is its own group everywhere.
std::string group_of(const std::string& condition, Grouping g);

struct SummaryRow {
  std::string group;
  std::string measure;
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

/// Per-trial measures (sdlp, swrr, driver_torque_rms) pool one value per
/// trial; per-change measures (lc_duration, overshoot, rms_steer_vel,
/// peak_angle) pool one value per lane change. Segments still open at the end
/// of a log are left out, as are overshoots with a cut-short window. CI is mean +- 1.96 SD / sqrt(n).
std::vector<SummaryRow> summarize(const std::vector<TrialReport>& reports, Grouping g);

void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows);
std::string format_summary_table(const std::vector<SummaryRow>& rows);

/// One line per trial with the lane-change measures averaged.
std::string trial_report_header();
std::string trial_report_row(const TrialReport& r);

}  // namespace hapsteer
