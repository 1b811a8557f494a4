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

#include "hapsteer/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include "hapsteer/errors.hpp"

namespace hapsteer {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

int sign(double v) noexcept { return (v > 0) - (v < 0); }

}  // namespace

void MetricsParams::validate() const {
  if (!(swrr_gap_deg > 0)) throw ConfigError("metrics swrr_gap_deg must be positive");
  if (!(psi_on_deg > psi_off_deg && psi_off_deg > 0)) {
    throw ConfigError("metrics needs psi_on_deg > psi_off_deg > 0");
  }
  if (!(overshoot_window_s >= 0)) throw ConfigError("metrics overshoot_window_s must be >= 0");
}

double sdlp(std::span<const double> y) {
  if (y.size() < 2) throw DomainError("sdlp needs at least two samples");
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double ss = 0.0;
  for (double v : y) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(y.size() - 1));
}

std::vector<std::size_t> stationary_points(std::span<const double> theta) {
  std::vector<std::size_t> out;
  if (theta.empty()) return out;
  out.push_back(0);
  int dir = 0;
  for (std::size_t j = 0; j + 1 < theta.size(); ++j) {
    const int s = sign(theta[j + 1] - theta[j]);
    if (s == 0) continue;
    if (dir != 0 && s != dir) out.push_back(j);
    dir = s;
  }
  return out;
}

std::size_t count_reversals(std::span<const double> theta, double gap) {
  const auto idx = stationary_points(theta);
  if (idx.empty()) return 0;
  std::size_t count = 0;
  // Upward: rise of at least gap above the lowest point since the last count.
  std::size_t k = idx.front();
  for (std::size_t i : idx) {
    if (theta[i] - theta[k] >= gap) {
      ++count;
      k = i;
    } else if (theta[i] < theta[k]) {
      k = i;
    }
  }
  k = idx.front();
  for (std::size_t i : idx) {
    if (theta[k] - theta[i] >= gap) {
      ++count;
      k = i;
    } else if (theta[i] > theta[k]) {
      k = i;
    }
  }
  return count;
}

double swrr(std::span<const double> theta_sw, double gap_rad, double duration_s) {
  if (!(duration_s > 0)) throw DomainError("swrr: duration must be positive");
  return static_cast<double>(count_reversals(theta_sw, gap_rad)) / (duration_s / 60.0);
}

std::vector<LcSegment> segment_lc(const DriveLog& log, const LaneGeometry& geometry,
                                  const MetricsParams& p) {
  const double on = p.psi_on_deg * kDeg;
  const double off = p.psi_off_deg * kDeg;
  std::vector<LcSegment> out;
  const auto& rec = log.records;

  bool open = false;
  LcSegment cur;
  for (std::size_t i = 0; i < rec.size(); ++i) {
    const LogRecord& r = rec[i];
    const double a = std::abs(r.psi);
    const int lane = geometry.lane_of(r.y);
    if (!open) {
      const bool rising = i > 0 && std::abs(rec[i - 1].psi) <= on && a > on;
      const double drift = r.v_x * std::sin(r.psi) + r.v_y * std::cos(r.psi);
      if (rising && sign(drift) == sign(r.psi)) {
        cur = LcSegment{};
        cur.begin = i;
        cur.start_t = r.t;
        cur.direction = sign(r.psi);
        cur.from_lane = lane;
        cur.to_lane = lane + cur.direction;
        open = true;
      }
      continue;
    }
    if (a < off) {
      if (lane == cur.to_lane) {
        cur.end = i;
        cur.end_t = r.t;
        out.push_back(cur);
        open = false;
      } else if (lane == cur.from_lane) {
        open = false;  // drifted and came back: not a lane change
      }
    }
  }
  if (open && cur.begin + 1 < rec.size()) {
    cur.end = rec.size() - 1;
    cur.end_t = rec.back().t;
    cur.truncated = true;
    out.push_back(cur);
  }
  return out;
}

OvershootResult overshoot(const DriveLog& log, const LcSegment& seg, double target_center,
                          double window_s) {
  OvershootResult out;
  const auto& rec = log.records;
  const double t_end = seg.end_t + window_s;
  std::size_t i = seg.end;
  for (; i < rec.size() && rec[i].t <= t_end; ++i) {
    out.value = std::max(out.value, std::abs(rec[i].y - target_center));
  }
  out.truncated = rec.empty() || rec.back().t < t_end;
  return out;
}

LcStats lc_stats(const DriveLog& log, const LcSegment& seg) {
  LcStats s;
  s.duration = seg.end_t - seg.start_t;
  double ss = 0.0;
  std::size_t n = 0;
  for (std::size_t i = seg.begin; i <= seg.end && i < log.records.size(); ++i) {
    const LogRecord& r = log.records[i];
    ss += r.theta_sw_dot * r.theta_sw_dot;
    s.peak_angle = std::max(s.peak_angle, std::abs(r.theta_sw));
    ++n;
  }
  if (n) s.rms_steer_vel = std::sqrt(ss / static_cast<double>(n));
  return s;
}

double driver_torque_rms(const DriveLog& log) {
  if (log.records.empty()) throw DomainError("driver_torque_rms: empty log");
  double ss = 0.0;
  for (const LogRecord& r : log.records) ss += r.tau_driver * r.tau_driver;
  return std::sqrt(ss / static_cast<double>(log.records.size()));
}

std::vector<std::pair<std::size_t, std::size_t>> lane_keep_runs(
    const DriveLog& log, const std::vector<StationRange>& lc_areas,
    const std::vector<LcSegment>& segments) {
  const auto& rec = log.records;
  std::vector<char> keep(rec.size(), 1);
  for (std::size_t i = 0; i < rec.size(); ++i) {
    for (const auto& [a, b] : lc_areas) {
      if (rec[i].x >= a && rec[i].x <= b) keep[i] = 0;
    }
  }
  for (const LcSegment& s : segments) {
    for (std::size_t i = s.begin; i <= s.end && i < rec.size(); ++i) keep[i] = 0;
  }
  std::vector<std::pair<std::size_t, std::size_t>> runs;
  std::size_t i = 0;
  while (i < rec.size()) {
    if (!keep[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < rec.size() && keep[j]) ++j;
    runs.emplace_back(i, j);
    i = j;
  }
  return runs;
}

TrialReport evaluate_trial(const DriveLog& log, const LaneGeometry& geometry,
                           const std::vector<StationRange>& lc_areas, const MetricsParams& p) {
  p.validate();
  TrialReport rep;
  rep.condition = log.condition;
  rep.seed = log.seed;
  rep.driver_torque_rms = driver_torque_rms(log);

  const auto segments = segment_lc(log, geometry, p);
  for (const LcSegment& seg : segments) {
    LcMeasure m;
    m.segment = seg;
    m.stats = lc_stats(log, seg);
    const int lane = std::clamp(seg.to_lane, 0, geometry.lane_count - 1);
    m.overshoot = overshoot(log, seg, geometry.center(lane), p.overshoot_window_s);
    rep.lane_changes.push_back(m);
  }

  double sdlp_sum = 0.0;
  std::size_t sdlp_runs = 0;
  std::size_t reversals = 0;
  std::vector<double> y;
  std::vector<double> theta;
  for (const auto& [a, b] : lane_keep_runs(log, lc_areas, segments)) {
    rep.lk_samples += b - a;
    if (b - a < 2) continue;
    y.clear();
    theta.clear();
    for (std::size_t i = a; i < b; ++i) {
      y.push_back(log.records[i].y);
      theta.push_back(log.records[i].theta_sw);
    }
    sdlp_sum += sdlp(y);
    ++sdlp_runs;
    reversals += count_reversals(theta, p.swrr_gap_deg * kDeg);
  }
  if (sdlp_runs) rep.sdlp = sdlp_sum / static_cast<double>(sdlp_runs);
  const double minutes = static_cast<double>(rep.lk_samples) * log.dt / 60.0;
  if (minutes > 0) rep.swrr = static_cast<double>(reversals) / minutes;
  return rep;
}

std::string group_of(const std::string& condition, Grouping g) {
  const auto dash = condition.find('-');
  if (g == Grouping::Condition || dash == std::string::npos) return condition;
  return g == Grouping::Strength ? condition.substr(0, dash) : condition.substr(dash + 1);
}

namespace {

SummaryRow describe(const std::string& group, const std::string& measure,
                    const std::vector<double>& v) {
  SummaryRow row;
  row.group = group;
  row.measure = measure;
  row.n = v.size();
  if (v.empty()) return row;
  double sum = 0.0;
  for (double x : v) sum += x;
  row.mean = sum / static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - row.mean) * (x - row.mean);
    row.sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  const double half = 1.96 * row.sd / std::sqrt(static_cast<double>(v.size()));
  row.ci_low = row.mean - half;
  row.ci_high = row.mean + half;
  return row;
}

}  // namespace

std::vector<SummaryRow> summarize(const std::vector<TrialReport>& reports, Grouping g) {
  if (reports.empty()) throw DomainError("summarize: no reports");
  std::vector<std::string> order;
  std::map<std::string, std::vector<const TrialReport*>> groups;
  for (const TrialReport& r : reports) {
    const std::string key = group_of(r.condition, g);
    if (!groups.count(key)) order.push_back(key);
    groups[key].push_back(&r);
  }

  std::vector<SummaryRow> rows;
  for (const std::string& key : order) {
    const auto& members = groups[key];
    std::vector<double> sd, sw, tq, dur, ov, rms, peak;
    for (const TrialReport* r : members) {
      sd.push_back(r->sdlp);
      sw.push_back(r->swrr);
      tq.push_back(r->driver_torque_rms);
      for (const LcMeasure& m : r->lane_changes) {
        if (m.segment.truncated) continue;
        dur.push_back(m.stats.duration);
        if (!m.overshoot.truncated) ov.push_back(m.overshoot.value);
        rms.push_back(m.stats.rms_steer_vel);
        peak.push_back(m.stats.peak_angle);
      }
    }
    rows.push_back(describe(key, "sdlp", sd));
    rows.push_back(describe(key, "swrr", sw));
    rows.push_back(describe(key, "driver_torque_rms", tq));
    rows.push_back(describe(key, "lc_duration", dur));
    rows.push_back(describe(key, "overshoot", ov));
    rows.push_back(describe(key, "rms_steer_vel", rms));
    rows.push_back(describe(key, "peak_angle", peak));
  }
  return rows;
}

void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows) {
  os << "group,measure,n,mean,sd,ci_low,ci_high\n";
  for (const SummaryRow& r : rows) {
    os << r.group << ',' << r.measure << ',' << r.n << ',' << format_double(r.mean) << ','
       << format_double(r.sd) << ',' << format_double(r.ci_low) << ','
       << format_double(r.ci_high) << '\n';
  }
}

std::string format_summary_table(const std::vector<SummaryRow>& rows) {
  std::ostringstream os;
  os << std::left << std::setw(15) << "group" << std::setw(19) << "measure" << std::right
     << std::setw(5) << "n" << std::setw(12) << "mean" << std::setw(12) << "sd"
     << std::setw(12) << "ci_low" << std::setw(12) << "ci_high" << '\n';
  os << std::setprecision(4);
  for (const SummaryRow& r : rows) {
    os << std::left << std::setw(15) << r.group << std::setw(19) << r.measure << std::right
       << std::setw(5) << r.n << std::setw(12) << r.mean << std::setw(12) << r.sd
       << std::setw(12) << r.ci_low << std::setw(12) << r.ci_high << '\n';
  }
  return os.str();
}

std::string trial_report_header() {
  return "condition,seed,sdlp,swrr,driver_torque_rms,lc_count,lc_duration,overshoot,"
         "rms_steer_vel,peak_angle";
}

std::string trial_report_row(const TrialReport& r) {
  double dur = 0, ov = 0, rms = 0, peak = 0;
  for (const LcMeasure& m : r.lane_changes) {
    dur += m.stats.duration;
    ov += m.overshoot.value;
    rms += m.stats.rms_steer_vel;
    peak += m.stats.peak_angle;
  }
  const double n = static_cast<double>(std::max<std::size_t>(1, r.lane_changes.size()));
  std::ostringstream os;
  os << r.condition << ',' << r.seed << ',' << format_double(r.sdlp) << ','
     << format_double(r.swrr) << ',' << format_double(r.driver_torque_rms) << ','
     << r.lane_changes.size() << ',' << format_double(dur / n) << ',' << format_double(ov / n)
     << ',' << format_double(rms / n) << ',' << format_double(peak / n);
  return os.str();
}

}  // namespace hapsteer
