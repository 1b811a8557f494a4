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

// Per-step telemetry and its CSV form. One record per simulation step; the
// column order below is the file format.

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "hapsteer/authority.hpp"
#include "hapsteer/consistency.hpp"

namespace hapsteer {

struct LogRecord {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double psi = 0.0;
  double v_x = 0.0;
  double v_y = 0.0;
  double r = 0.0;
  double theta_sw = 0.0;
  double theta_sw_dot = 0.0;
  double tau_driver = 0.0;
  double tau_hapi = 0.0;
  double tau_hapa = 0.0;
  double K_h = 0.0;
  AssistMode mode = AssistMode::LK;
  Verdict verdict = Verdict::Consistent;
  int intent = 0;
  double e_y = 0.0;
  double e_theta = 0.0;
  double e_theta_dot = 0.0;
  double W_hapi = 0.0;
  double W_dr = 0.0;
  double S_c = 0.0;
  double head_yaw = 0.0;
  int lane_id = 0;
};

inline constexpr std::array<std::string_view, 24> kLogColumns{
    "t",       "x",          "y",        "psi",        "v_x",     "v_y",
    "r",       "theta_sw",   "theta_sw_dot", "tau_driver", "tau_hapi", "tau_hapa",
    "K_h",     "mode",       "verdict",  "intent",     "e_y",     "e_theta",
    "e_theta_dot", "W_hapi", "W_dr",     "S_c",        "head_yaw", "lane_id"};

/// First line of every log file; bump the version when columns change.
inline constexpr std::string_view kLogMagic = "# hapsteer-drivelog v1";

struct DriveLog {
  std::string condition;
  std::uint64_t seed = 0;
  double dt = 0.0;
  std::vector<LogRecord> records;

  bool empty() const noexcept { return records.empty(); }
  std::size_t size() const noexcept { return records.size(); }
};

/// Shortest round-trip decimal form of v.
std::string format_double(double v);

void write_csv(std::ostream& os, const DriveLog& log);
std::string to_csv(const DriveLog& log);

/// Parses what write_csv produced. Throws ConfigError on malformed input.
DriveLog read_csv(std::istream& is);

/// Writes to a temporary sibling and renames it into place.
void save_csv(const std::filesystem::path& path, const DriveLog& log);
DriveLog load_csv(const std::filesystem::path& path);

/// "{condition}_{seed}.csv"
std::string log_file_name(std::string_view condition, std::uint64_t seed);

}  // namespace hapsteer
