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

#include "hapsteer/drive_log.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

#include "hapsteer/errors.hpp"

namespace hapsteer {

std::string format_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

namespace {

void put(std::string& line, double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  line.append(buf, end);
  line.push_back(',');
}

void put(std::string& line, int v) {
  char buf[16];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  line.append(buf, end);
  line.push_back(',');
}

void put(std::string& line, std::string_view v) {
  line.append(v);
  line.push_back(',');
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_double(std::string_view s, std::size_t line_no) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError("drive log line " + std::to_string(line_no) + ": bad number '" +
                      std::string(s) + "'");
  }
  return v;
}

int parse_int(std::string_view s, std::size_t line_no) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError("drive log line " + std::to_string(line_no) + ": bad integer '" +
                      std::string(s) + "'");
  }
  return v;
}

}  // namespace

void write_csv(std::ostream& os, const DriveLog& log) {
  os << kLogMagic << " condition=" << log.condition << " seed=" << log.seed
     << " dt=" << format_double(log.dt) << '\n';
  std::string line;
  for (std::size_t i = 0; i < kLogColumns.size(); ++i) {
    if (i) line.push_back(',');
    line.append(kLogColumns[i]);
  }
  line.push_back('\n');
  os << line;

  for (const LogRecord& r : log.records) {
    line.clear();
    for (double v : {r.t, r.x, r.y, r.psi, r.v_x, r.v_y, r.r, r.theta_sw, r.theta_sw_dot,
                     r.tau_driver, r.tau_hapi, r.tau_hapa, r.K_h}) {
      put(line, v);
    }
    put(line, to_string(r.mode));
    put(line, to_string(r.verdict));
    put(line, r.intent);
    for (double v : {r.e_y, r.e_theta, r.e_theta_dot, r.W_hapi, r.W_dr, r.S_c, r.head_yaw}) {
      put(line, v);
    }
    put(line, r.lane_id);
    line.back() = '\n';
    os << line;
  }
}

std::string to_csv(const DriveLog& log) {
  std::ostringstream os;
  write_csv(os, log);
  return os.str();
}

DriveLog read_csv(std::istream& is) {
  DriveLog log;
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(is, line)) throw ConfigError("drive log: empty input");
  ++line_no;
  if (line.rfind(kLogMagic, 0) != 0) throw ConfigError("drive log: missing version line");
  for (std::string_view tok : split(std::string_view(line).substr(kLogMagic.size()), ' ')) {
    if (tok.rfind("condition=", 0) == 0) log.condition = std::string(tok.substr(10));
    if (tok.rfind("seed=", 0) == 0) {
      const auto s = tok.substr(5);
      std::from_chars(s.data(), s.data() + s.size(), log.seed);
    }
    if (tok.rfind("dt=", 0) == 0) log.dt = parse_double(tok.substr(3), line_no);
  }

  if (!std::getline(is, line)) throw ConfigError("drive log: missing header row");
  ++line_no;
  const auto header = split(line, ',');
  if (header.size() != kLogColumns.size()) throw ConfigError("drive log: unexpected columns");
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] != kLogColumns[i]) {
      throw ConfigError("drive log: column " + std::to_string(i) + " is '" +
                        std::string(header[i]) + "', expected '" +
                        std::string(kLogColumns[i]) + "'");
    }
  }

  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != kLogColumns.size()) {
      throw ConfigError("drive log line " + std::to_string(line_no) + ": expected " +
                        std::to_string(kLogColumns.size()) + " fields");
    }
    LogRecord r;
    double* head[] = {&r.t,        &r.x,        &r.y,        &r.psi,      &r.v_x,
                      &r.v_y,      &r.r,        &r.theta_sw, &r.theta_sw_dot,
                      &r.tau_driver, &r.tau_hapi, &r.tau_hapa, &r.K_h};
    std::size_t k = 0;
    for (double* p : head) *p = parse_double(f[k++], line_no);
    if (f[k] == "LK") {
      r.mode = AssistMode::LK;
    } else if (f[k] == "LC") {
      r.mode = AssistMode::LC;
    } else {
      throw ConfigError("drive log line " + std::to_string(line_no) + ": bad mode");
    }
    ++k;
    if (f[k] == "consistent") {
      r.verdict = Verdict::Consistent;
    } else if (f[k] == "inconsistent") {
      r.verdict = Verdict::Inconsistent;
    } else {
      throw ConfigError("drive log line " + std::to_string(line_no) + ": bad verdict");
    }
    ++k;
    r.intent = parse_int(f[k++], line_no);
    double* tail[] = {&r.e_y, &r.e_theta, &r.e_theta_dot, &r.W_hapi,
                      &r.W_dr, &r.S_c,    &r.head_yaw};
    for (double* p : tail) *p = parse_double(f[k++], line_no);
    r.lane_id = parse_int(f[k], line_no);
    log.records.push_back(r);
  }
  return log;
}

void save_csv(const std::filesystem::path& path, const DriveLog& log) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + tmp.string());
    write_csv(os, log);
    if (!os) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

DriveLog load_csv(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open " + path.string());
  return read_csv(is);
}

std::string log_file_name(std::string_view condition, std::uint64_t seed) {
  return std::string(condition) + "_" + std::to_string(seed) + ".csv";
}

}  // namespace hapsteer
