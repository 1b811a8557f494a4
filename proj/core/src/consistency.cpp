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

#include "hapsteer/consistency.hpp"

#include <cmath>

#include "hapsteer/errors.hpp"

namespace hapsteer {

std::string_view to_string(Verdict v) noexcept {
  return v == Verdict::Consistent ? "consistent" : "inconsistent";
}

Verdict classify(double S_c, double beta, double delta) noexcept {
  return (S_c < 0.0 && beta > delta) ? Verdict::Inconsistent : Verdict::Consistent;
}

void ConsistencyParams::validate() const {
  if (!(window_s > 0)) throw ConfigError("consistency window must be positive");
  if (!(delta > 0)) throw ConfigError("consistency delta must be positive");
  if (debounce < 1) throw ConfigError("consistency debounce must be at least 1");
}

ConsistencyDetector::ConsistencyDetector(ConsistencyParams params, double dt)
    : params_(params), dt_(dt) {
  params_.validate();
  if (!(dt > 0)) throw DomainError("ConsistencyDetector: dt must be positive");
  intervals_ = static_cast<std::size_t>(std::lround(params_.window_s / dt));
  if (intervals_ < 1) intervals_ = 1;
  window_.set_capacity(intervals_ + 1);
}

void ConsistencyDetector::resum() noexcept {
  sum_hapi_ = 0.0;
  sum_dr_ = 0.0;
  for (const Sample& s : window_) {
    sum_hapi_ += s.p_hapi;
    sum_dr_ += s.p_dr;
  }
  pushes_since_resum_ = 0;
}

const ConsistencyState& ConsistencyDetector::update(double tau_hapi, double tau_dr,
                                                    double e_theta_dot) {
  if (window_.full()) {
    sum_hapi_ -= window_.front().p_hapi;
    sum_dr_ -= window_.front().p_dr;
  }
  const Sample sample{tau_hapi * e_theta_dot, tau_dr * e_theta_dot};
  window_.push_back(sample);
  sum_hapi_ += sample.p_hapi;
  sum_dr_ += sample.p_dr;
  if (++pushes_since_resum_ >= window_.capacity()) resum();

  // Trapezoid over the stored samples, normalised by the nominal window span.
  const double span = static_cast<double>(intervals_) * dt_;
  double trap_hapi = 0.0;
  double trap_dr = 0.0;
  if (window_.size() >= 2) {
    trap_hapi = dt_ * (sum_hapi_ - 0.5 * (window_.front().p_hapi + window_.back().p_hapi));
    trap_dr = dt_ * (sum_dr_ - 0.5 * (window_.front().p_dr + window_.back().p_dr));
  }
  state_.W_hapi = trap_hapi / span;
  state_.W_dr = trap_dr / span;
  state_.beta = state_.W_hapi - state_.W_dr;
  state_.S_c = tau_hapi * tau_dr;
  state_.window_full = window_.full();

  state_.raw_verdict = state_.window_full ? classify(state_.S_c, state_.beta, params_.delta)
                                          : Verdict::Consistent;

  if (state_.raw_verdict == streak_verdict_) {
    ++streak_;
  } else {
    streak_verdict_ = state_.raw_verdict;
    streak_ = 1;
  }
  if (streak_verdict_ != state_.verdict && streak_ >= params_.debounce) {
    state_.verdict = streak_verdict_;
  }
  return state_;
}

}  // namespace hapsteer
