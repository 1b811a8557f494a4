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

// Random drive logs for the metric oracles, plus brute-force reference
// implementations that share no code with the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "hapsteer/drive_log.hpp"

namespace hapsteer::testing {

inline DriveLog random_log(std::uint64_t seed, std::size_t n = 3000) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  DriveLog log;
  log.condition = "strong-normal";
  log.seed = seed;
  log.dt = 1.0 / 60.0;
  double y = 1.75;
  double theta = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    LogRecord r;
    r.t = static_cast<double>(i) * log.dt;
    r.x = 19.4 * r.t;
    y += 0.02 * g(rng);
    theta += 0.01 * g(rng);
    r.y = y;
    r.v_x = 19.4;
    r.psi = 0.01 * u(rng);
    r.theta_sw = theta;
    r.theta_sw_dot = 0.5 * g(rng);
    r.tau_driver = 0.4 * g(rng);
    log.records.push_back(r);
  }
  return log;
}

inline double brute_sd(const std::vector<double>& v) {
  // Two-pass with long double accumulation.
  long double mean = 0.0L;
  for (double x : v) mean += x;
  mean /= static_cast<long double>(v.size());
  long double ss = 0.0L;
  for (double x : v) ss += (x - mean) * (x - mean);
  return static_cast<double>(std::sqrt(ss / static_cast<long double>(v.size() - 1)));
}

/// Reversal count: local extrema found by neighbour comparison (plateaus
/// collapsed to their last sample), then a swing of at least gap away from
/// the running extreme since the previous count, separately upward and
/// downward.
inline std::size_t brute_reversals(const std::vector<double>& th, double gap) {
  if (th.empty()) return 0;
  std::vector<std::size_t> compact;  // indices where the value changes, last of each plateau
  for (std::size_t i = 0; i < th.size(); ++i) {
    if (i + 1 < th.size() && th[i + 1] == th[i]) continue;
    compact.push_back(i);
  }
  std::vector<double> pts{th[0]};
  for (std::size_t k = 1; k + 1 < compact.size(); ++k) {
    const double a = th[compact[k - 1]], b = th[compact[k]], c = th[compact[k + 1]];
    if ((b > a && b > c) || (b < a && b < c)) pts.push_back(b);
  }
  std::size_t n = 0;
  double lo = pts[0];
  for (double p : pts) {
    if (p - lo >= gap) {
      ++n;
      lo = p;
    }
    lo = std::min(lo, p);
  }
  double hi = pts[0];
  for (double p : pts) {
    if (hi - p >= gap) {
      ++n;
      hi = p;
    }
    hi = std::max(hi, p);
  }
  return n;
}

inline bool close_rel(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace hapsteer::testing
