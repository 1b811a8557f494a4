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

// INI configuration. Every tunable has a compiled-in default; a file only
// needs the keys it changes. dump_config() writes the complete set.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "hapsteer/metrics.hpp"
#include "hapsteer/scenario.hpp"

namespace hapsteer {

struct SimConfig {
  TrialConfig trial{};
  MetricsParams metrics{};
  std::vector<std::string> conditions;  ///< empty: all seven
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};

  std::vector<Condition> condition_list() const;
  void validate() const;
};

/// Throws ConfigError for unknown sections/keys or unparsable values.
SimConfig parse_config(std::istream& is);
SimConfig load_config(const std::filesystem::path& path);

void dump_config(std::ostream& os, const SimConfig& cfg);
std::string dump_config(const SimConfig& cfg);

/// "1,2,5-8" -> {1, 2, 5, 6, 7, 8}
std::vector<std::uint64_t> parse_seed_list(const std::string& text);

/// Conditions matching a comma-separated list of names or globs
/// ("strong-*", "*-gentle", "all").
std::vector<Condition> filter_conditions(const std::string& filter);

}  // namespace hapsteer
