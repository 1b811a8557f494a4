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

#include "hapsteer/intent.hpp"

#include <algorithm>
#include <cmath>

#include <spdlog/spdlog.h>

#include "hapsteer/errors.hpp"

namespace hapsteer {

FeatureWindow::FeatureWindow(std::size_t capacity) : samples_(capacity) {
  if (capacity == 0) throw ConfigError("feature window capacity must be positive");
}

void FeatureWindow::push(FeatureSample s) {
  if (s.head > 1.0 || s.head < -1.0) {
    if (clamp_warnings_ == 0) {
      spdlog::warn("feature window: head yaw {} outside [-1, 1], clamping", s.head);
    }
    ++clamp_warnings_;
    s.head = std::clamp(s.head, -1.0, 1.0);
  }
  samples_.push_back(s);
}

std::vector<double> FeatureWindow::flatten() const {
  std::vector<double> out;
  out.reserve(samples_.size() * FeatureSample::kFeatureCount);
  for (const FeatureSample& s : samples_) {
    out.insert(out.end(), {s.head, s.a, s.v, s.theta_sw, s.d_adj, s.psi});
  }
  return out;
}

int predict(const IntentPredictor& predictor, const FeatureWindow& window,
            const PredictionContext& ctx) {
  if (!window.full()) return 0;
  return predictor.predict(window, ctx) != 0 ? 1 : 0;
}

OraclePredictor::OraclePredictor(std::vector<double> crossing_x, double horizon_s)
    : crossing_x_(std::move(crossing_x)), horizon_s_(horizon_s) {
  std::sort(crossing_x_.begin(), crossing_x_.end());
}

int OraclePredictor::predict(const FeatureWindow&, const PredictionContext& ctx) const {
  if (!(ctx.v_x > 0)) return 0;
  for (double cx : crossing_x_) {
    const double ahead = cx - ctx.x;
    if (ahead > 0.0 && ahead / ctx.v_x <= horizon_s_) return 1;
  }
  return 0;
}

int heuristic_predict(const FeatureWindow& window, const HeuristicThresholds& th) {
  if (!window.full()) return 0;
  const std::size_t n = window.size();
  const auto count = [&](double seconds) {
    const auto k = static_cast<std::size_t>(std::lround(seconds * th.sample_rate_hz));
    return std::clamp<std::size_t>(k, 2, n);
  };

  const std::size_t nh = count(th.head_window_s);
  double head_sum = 0.0;
  for (std::size_t i = n - nh; i < n; ++i) head_sum += std::abs(window.sample(i).head);
  if (!(head_sum / static_cast<double>(nh) > th.head_threshold)) return 0;

  // Least-squares slope of d_adj against time over the drift window.
  const std::size_t nd = count(th.drift_window_s);
  const double dt = 1.0 / th.sample_rate_hz;
  double t_mean = 0.0;
  double d_mean = 0.0;
  for (std::size_t j = 0; j < nd; ++j) {
    t_mean += static_cast<double>(j) * dt;
    d_mean += window.sample(n - nd + j).d_adj;
  }
  t_mean /= static_cast<double>(nd);
  d_mean /= static_cast<double>(nd);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t j = 0; j < nd; ++j) {
    const double tc = static_cast<double>(j) * dt - t_mean;
    sxy += tc * (window.sample(n - nd + j).d_adj - d_mean);
    sxx += tc * tc;
  }
  const double rate = sxy / sxx;
  const double d_now = window.latest().d_adj;
  if (d_now <= 0.0) return 1;
  if (!(rate < 0.0)) return 0;
  return d_now / -rate <= th.horizon_s ? 1 : 0;
}

int ExternalPredictor::predict(const FeatureWindow& window, const PredictionContext&) const {
  const std::vector<double> features = window.flatten();
  return model_(features) != 0 ? 1 : 0;
}

}  // namespace hapsteer
