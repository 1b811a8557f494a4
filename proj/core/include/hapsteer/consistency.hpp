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

// Driver / guidance intention consistency from modified pseudo-work.
//
// Each agent's pseudo-work is the trailing-window mean of its torque times
// the heading-error rate, so it registers opposing efforts even when the
// vehicle does not move laterally. Disagreement is declared when the two
// torques have opposite signs AND the guidance out-works the driver by more
// than the threshold delta.

#include <cstddef>
#include <string_view>

#include <boost/circular_buffer.hpp>

namespace hapsteer {

enum class Verdict { Consistent, Inconsistent };

std::string_view to_string(Verdict v) noexcept;

/// Truth table: S_c > 0 -> Consistent; S_c < 0 and beta > delta ->
/// Inconsistent; everything else (including S_c == 0 and beta == delta)
/// -> Consistent.
Verdict classify(double S_c, double beta, double delta) noexcept;

struct ConsistencyParams {
  double window_s = 1.0;  ///< pseudo-work averaging window
  double delta = 0.05;    ///< N m rad / s
  int debounce = 3;       ///< identical raw verdicts needed to switch
  /// Feed the estimated (instead of the true) driver torque to the detector.
  bool use_estimated_driver_torque = false;

  void validate() const;
};

struct ConsistencyState {
  double W_hapi = 0.0;
  double W_dr = 0.0;
  double S_c = 0.0;
  double beta = 0.0;
  Verdict raw_verdict = Verdict::Consistent;
  Verdict verdict = Verdict::Consistent;
  bool window_full = false;
};

inline Verdict classify(const ConsistencyState& s, double delta) noexcept {
  return classify(s.S_c, s.beta, delta);
}

class ConsistencyDetector {
 public:
  ConsistencyDetector(ConsistencyParams params, double dt);

  /// Pushes one sample and recomputes the pseudo-work pair, the torque
  /// product, and the debounced verdict.
  const ConsistencyState& update(double tau_hapi, double tau_dr, double e_theta_dot);

  const ConsistencyState& state() const noexcept { return state_; }
  const ConsistencyParams& params() const noexcept { return params_; }

  /// Number of intervals spanned by a full window, round(window_s / dt).
  std::size_t window_intervals() const noexcept { return intervals_; }

 private:
  struct Sample {
    double p_hapi;
    double p_dr;
  };

  void resum() noexcept;

  ConsistencyParams params_;
  double dt_;
  std::size_t intervals_;
  boost::circular_buffer<Sample> window_;
  double sum_hapi_ = 0.0;
  double sum_dr_ = 0.0;
  std::size_t pushes_since_resum_ = 0;
  int streak_ = 0;
  Verdict streak_verdict_ = Verdict::Consistent;
  ConsistencyState state_{};
};

}  // namespace hapsteer
