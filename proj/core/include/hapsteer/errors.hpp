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

#include <stdexcept>
#include <string>

namespace hapsteer {

/// Precondition on a physical quantity violated (e.g. non-positive speed).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Non-finite value produced or consumed by an integrator.
class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or unparsable run configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller broke an argument contract (e.g. a gain outside [0, 1]).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A trial stopped early because the vehicle left the road.
class TrialAborted : public std::runtime_error {
 public:
  TrialAborted(const std::string& what, double t, double x, double y)
      : std::runtime_error(what), t_(t), x_(x), y_(y) {}

  double time() const noexcept { return t_; }
  double x() const noexcept { return x_; }
  double y() const noexcept { return y_; }

 private:
  double t_;
  double x_;
  double y_;
};

}  // namespace hapsteer
