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

// Lane-change intention: the 3 s observation window of six features and the
// binary "will cross a lane boundary within m seconds" prediction contract.
// Any model can sit behind IntentPredictor; two are built in (a ground-truth
// oracle for scripted drivers and a head-glance + drift heuristic), and a
// third adapts an arbitrary vector-in / bit-out callable.

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/circular_buffer.hpp>

namespace hapsteer {

struct FeatureSample {
  double head = 0.0;      ///< normalised head yaw in [-1, 1], left positive
  double a = 0.0;         ///< longitudinal acceleration (m/s^2)
  double v = 0.0;         ///< longitudinal velocity (m/s)
  double theta_sw = 0.0;  ///< steering wheel angle (rad)
  double d_adj = 0.0;     ///< lateral distance to the adjacent-lane boundary (m)
  double psi = 0.0;       ///< yaw angle (rad)

  static constexpr std::size_t kFeatureCount = 6;
};

class FeatureWindow {
 public:
  static constexpr std::size_t kDefaultCapacity = 180;

  explicit FeatureWindow(std::size_t capacity = kDefaultCapacity);

  /// Appends a sample, evicting the oldest once full. A head value outside
  /// [-1, 1] is clamped and counted as a warning.
  void push(FeatureSample s);

  bool full() const noexcept { return samples_.full(); }
  std::size_t size() const noexcept { return samples_.size(); }
  std::size_t capacity() const noexcept { return samples_.capacity(); }
  std::size_t clamp_warnings() const noexcept { return clamp_warnings_; }

  /// Oldest first, i.e. sample(0) is t0 - k + 1 once full.
  const FeatureSample& sample(std::size_t i) const { return samples_[i]; }
  const FeatureSample& latest() const { return samples_.back(); }

  /// [head, a, v, theta_sw, d_adj, psi] per sample, oldest sample first.
  std::vector<double> flatten() const;

 private:
  boost::circular_buffer<FeatureSample> samples_;
  std::size_t clamp_warnings_ = 0;
};

/// Side information a predictor may use besides the window. Only the
/// oracle looks at it.
struct PredictionContext {
  double t = 0.0;
  double x = 0.0;
  double v_x = 0.0;
};

class IntentPredictor {
 public:
  virtual ~IntentPredictor() = default;
  virtual int predict(const FeatureWindow& window, const PredictionContext& ctx) const = 0;
  virtual std::string_view name() const noexcept = 0;
};

/// 0 until the window is full, otherwise the predictor's output.
int predict(const IntentPredictor& predictor, const FeatureWindow& window,
            const PredictionContext& ctx);

/// Knows where the scripted driver's reference path crosses a lane boundary
/// and reports 1 from horizon_s before each crossing until the crossing.
class OraclePredictor final : public IntentPredictor {
 public:
  OraclePredictor(std::vector<double> crossing_x, double horizon_s = 3.0);

  int predict(const FeatureWindow& window, const PredictionContext& ctx) const override;
  std::string_view name() const noexcept override { return "oracle"; }

  const std::vector<double>& crossings() const noexcept { return crossing_x_; }

 private:
  std::vector<double> crossing_x_;
  double horizon_s_;
};

struct HeuristicThresholds {
  double head_threshold = 0.3;  ///< mean |head| needed over head_window_s
  double head_window_s = 0.5;
  double drift_window_s = 0.5;  ///< least-squares window for the d_adj rate
  double horizon_s = 3.0;       ///< crossing must be projected within this
  double sample_rate_hz = 60.0;
};

/// 1 when the driver has been glancing (mean |head| over the last
/// head_window_s above threshold) and the linear projection of d_adj reaches
/// zero within horizon_s.
int heuristic_predict(const FeatureWindow& window, const HeuristicThresholds& thresholds);

class HeuristicPredictor final : public IntentPredictor {
 public:
  explicit HeuristicPredictor(HeuristicThresholds t = {}) : thresholds_(t) {}

  int predict(const FeatureWindow& window, const PredictionContext&) const override {
    return heuristic_predict(window, thresholds_);
  }
  std::string_view name() const noexcept override { return "heuristic"; }

 private:
  HeuristicThresholds thresholds_;
};

/// Adapts a callable that maps the flattened 6k-vector to {0, 1}.
class ExternalPredictor final : public IntentPredictor {
 public:
  using Model = std::function<int(std::span<const double>)>;

  explicit ExternalPredictor(Model model) : model_(std::move(model)) {}

  int predict(const FeatureWindow& window, const PredictionContext&) const override;
  std::string_view name() const noexcept override { return "external"; }

 private:
  Model model_;
};

/// Line-oriented bridge to a child process: for every prediction one line
/// of 6k comma-separated numbers is written to its stdin and one line
/// containing 0 or 1 is read back from its stdout. The process is started
/// lazily and shut down on destruction.
class ProcessModel {
 public:
  explicit ProcessModel(std::string command);
  ~ProcessModel();
  ProcessModel(const ProcessModel&) = delete;
  ProcessModel& operator=(const ProcessModel&) = delete;

  int operator()(std::span<const double> features);

 private:
  void start();

  std::string command_;
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string pending_;
};

/// ExternalPredictor backed by a shared ProcessModel.
std::unique_ptr<IntentPredictor> make_process_predictor(const std::string& command);

}  // namespace hapsteer
