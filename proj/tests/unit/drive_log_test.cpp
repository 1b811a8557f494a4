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

#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

#include "hapsteer/drive_log.hpp"
#include "hapsteer/errors.hpp"
#include "synthetic_log.hpp"

namespace hapsteer {
namespace {

TEST(FormatDouble, RoundTrips) {
  for (double v : {0.0, -0.0, 1.0 / 3.0, 1e-300, 6.02214076e23, -2.5, 0.1}) {
    EXPECT_EQ(std::stod(format_double(v)), v) << format_double(v);
  }
  EXPECT_EQ(format_double(0.5), "0.5");
}

TEST(DriveLogCsv, VersionLineAndHeader) {
  DriveLog log = testing::random_log(1, 3);
  std::istringstream is(to_csv(log));
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line.rfind(kLogMagic, 0), 0u);
  std::getline(is, line);
  std::string expected;
  for (auto c : kLogColumns) expected += (expected.empty() ? "" : ",") + std::string(c);
  EXPECT_EQ(line, expected);
}

TEST(DriveLogCsv, RoundTrip) {
  DriveLog log = testing::random_log(2, 500);
  log.records[10].mode = AssistMode::LC;
  log.records[11].verdict = Verdict::Inconsistent;
  log.records[12].intent = 1;
  log.records[13].lane_id = 1;
  std::istringstream is(to_csv(log));
  const DriveLog back = read_csv(is);
  EXPECT_EQ(back.condition, log.condition);
  EXPECT_EQ(back.seed, log.seed);
  EXPECT_EQ(back.dt, log.dt);
  EXPECT_EQ(to_csv(back), to_csv(log));
}

TEST(DriveLogCsv, RejectsMalformedInput) {
  std::istringstream empty("");
  EXPECT_THROW(read_csv(empty), ConfigError);
  std::istringstream no_magic("t,x\n1,2\n");
  EXPECT_THROW(read_csv(no_magic), ConfigError);
  std::string text = to_csv(testing::random_log(3, 2));
  text.replace(text.rfind("0.0"), 3, "abc");
  std::istringstream bad(text);
  EXPECT_THROW(read_csv(bad), ConfigError);
}

TEST(DriveLogCsv, SaveAndLoad) {
  const auto dir = std::filesystem::temp_directory_path() / "hapsteer_drive_log_test";
  std::filesystem::create_directories(dir);
  const DriveLog log = testing::random_log(4, 100);
  const auto path = dir / log_file_name(log.condition, log.seed);
  save_csv(path, log);
  EXPECT_EQ(path.filename().string(), "strong-normal_4.csv");
  EXPECT_EQ(to_csv(load_csv(path)), to_csv(log));
  std::filesystem::remove_all(dir);
  EXPECT_THROW(load_csv(dir / "missing.csv"), ConfigError);
}

}  // namespace
}  // namespace hapsteer
