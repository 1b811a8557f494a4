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

#include "hapsteer/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hapsteer/errors.hpp"
#include "hapsteer/metrics.hpp"

namespace hapsteer {

double gain_jump_bound(double dt, const AuthorityParams& p) noexcept {
  const double endpoint = 0.5 * (1.0 + std::tanh(-p.lambda * p.gamma));
  const double c = std::cosh(p.lambda * (dt - p.gamma));
  const double slope = dt * 0.5 * p.lambda / (c * c);
  return std::max(3.4e-4, endpoint) + slope;
}

TrialConfig episode_config(const TrialConfig& base) {
  TrialConfig cfg = base;
  cfg.scenario.events.clear();
  cfg.predictor.kind = "oracle";
  return cfg;
}

EpisodeReport run_false_lc_episode(const TrialConfig& base, const EpisodeOptions& opt) {
  const TrialConfig cfg = episode_config(base);
  EpisodeReport rep;

  TrialOptions to;
  to.forced_intent_times = {opt.force_time};
  to.resist_windows = {{opt.force_time, opt.force_time + opt.resist_s}};
  to.stop_time = opt.force_time + opt.run_after;
  to.on_event = [&](double t, std::string_view what) {
    if (what == "lc_started") {
      ++rep.lc_starts;
      if (!rep.guidance_onset) rep.guidance_onset = t;
    } else if (what == "replanned") {
      ++rep.replans;
    }
  };
  rep.log = run_trial(opt.condition, cfg, opt.seed, to);
  rep.jump_bound = gain_jump_bound(rep.log.dt, cfg.authority);

  const auto& rec = rep.log.records;
  for (std::size_t i = 1; i < rec.size(); ++i) {
    if (rec[i].verdict == rec[i - 1].verdict) continue;
    const double jump = std::abs(rec[i].K_h - rec[i - 1].K_h);
    double& slot = rec[i].verdict == Verdict::Inconsistent ? rep.max_jump_to_inconsistent
                                                           : rep.max_jump_to_consistent;
    slot = std::max(slot, jump);
  }
  if (!rep.guidance_onset) return rep;

  for (const LogRecord& r : rec) {
    if (r.t < *rep.guidance_onset) continue;
    if (!rep.switch_time) {
      if (r.verdict == Verdict::Inconsistent) rep.switch_time = r.t;
      continue;
    }
    if (!rep.collapse_time && r.K_h < 0.02) rep.collapse_time = r.t;
    if (!rep.back_time) {
      if (r.verdict == Verdict::Consistent) rep.back_time = r.t;
      continue;
    }
    if (!rep.recovered_time && r.K_h > 0.99) rep.recovered_time = r.t;
  }
  return rep;
}

std::string check_gain_trace(const DriveLog& log) {
  const auto& rec = log.records;
  for (std::size_t i = 0; i < rec.size(); ++i) {
    if (!(rec[i].K_h >= 0.0 && rec[i].K_h <= 1.0)) {
      return "K_h=" + format_double(rec[i].K_h) + " outside [0,1] at t=" +
             format_double(rec[i].t);
    }
    if (i == 0 || rec[i].verdict != rec[i - 1].verdict) continue;
    const double d = rec[i].K_h - rec[i - 1].K_h;
    const bool bad = rec[i].verdict == Verdict::Inconsistent ? d > 1e-12 : d < -1e-12;
    if (bad) return "K_h not monotone within an episode at t=" + format_double(rec[i].t);
  }
  return {};
}

double pseudo_work_deviation(const DriveLog& log, double window_s) {
  const auto& rec = log.records;
  const auto n = static_cast<std::size_t>(std::max(1L, std::lround(window_s / log.dt)));
  const double span = static_cast<double>(n) * log.dt;
  double worst = 0.0;
  for (std::size_t i = 0; i < rec.size(); ++i) {
    // Row i holds the window ending at row i - 1.
    const std::size_t m = std::min(i, n + 1);
    double wh = 0.0;
    double wd = 0.0;
    for (std::size_t k = 1; k < m; ++k) {
      const LogRecord& a = rec[i - m + k - 1];
      const LogRecord& b = rec[i - m + k];
      wh += 0.5 * log.dt * (a.tau_hapi * a.e_theta_dot + b.tau_hapi * b.e_theta_dot);
      wd += 0.5 * log.dt * (a.tau_driver * a.e_theta_dot + b.tau_driver * b.e_theta_dot);
    }
    worst = std::max(worst, std::abs(wh / span - rec[i].W_hapi));
    worst = std::max(worst, std::abs(wd / span - rec[i].W_dr));
  }
  return worst;
}

namespace {

std::string fmt_opt(const std::optional<double>& v) {
  return v ? format_double(std::round(*v * 1000.0) / 1000.0) : std::string("none");
}

CheckResult make(std::string name, bool ok, std::string detail) {
  return {std::move(name), ok, std::move(detail)};
}

void episode_checks(const TrialConfig& cfg, std::vector<CheckResult>& out) {
  const EpisodeReport rep = run_false_lc_episode(cfg);
  std::ostringstream d;
  d << "onset=" << fmt_opt(rep.guidance_onset) << " switch=" << fmt_opt(rep.switch_time)
    << " collapse=" << fmt_opt(rep.collapse_time) << " back=" << fmt_opt(rep.back_time)
    << " recovered=" << fmt_opt(rep.recovered_time) << " replans=" << rep.replans;
  const bool detected = rep.guidance_onset && rep.switch_time &&
                        *rep.switch_time - *rep.guidance_onset <= 1.5;
  const bool collapsed = detected && rep.collapse_time &&
                         *rep.collapse_time - *rep.switch_time <= 2.0;
  const bool recovered = rep.back_time && rep.recovered_time &&
                         *rep.recovered_time - *rep.back_time <= 3.0;
  out.push_back(make("false-lc-detection", detected, d.str()));
  out.push_back(make("false-lc-collapse", collapsed && rep.replans == 1, d.str()));
  out.push_back(make("false-lc-recovery", recovered, d.str()));

  std::ostringstream j;
  j << "max |dK_h| to inconsistent " << rep.max_jump_to_inconsistent << ", to consistent "
    << rep.max_jump_to_consistent << ", bound " << rep.jump_bound;
  out.push_back(make("gain-continuity",
                     rep.max_jump_to_inconsistent > 0 &&
                         rep.max_jump_to_inconsistent <= rep.jump_bound &&
                         rep.max_jump_to_consistent > 0 &&
                         rep.max_jump_to_consistent <= rep.jump_bound,
                     j.str()));

  TrialConfig broken = cfg;
  broken.authority.capture_shifting = false;
  const EpisodeReport mut = run_false_lc_episode(broken);
  const double worst = std::max(mut.max_jump_to_inconsistent, mut.max_jump_to_consistent);
  out.push_back(make("gain-continuity-hook", worst > mut.jump_bound,
                     "uncaptured K_shifting gives max |dK_h| = " + format_double(worst)));

  const std::string trace = check_gain_trace(rep.log);
  out.push_back(make("gain-trace-episode", trace.empty(), trace.empty() ? "ok" : trace));
}

}  // namespace

std::vector<CheckResult> run_verification(const TrialConfig& cfg, const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  const double dt = cfg.scenario.dt();

  {
    VehicleState v;
    v.v_x = cfg.scenario.ego_speed();
    const double delta = 0.02;
    for (int i = 0; i < static_cast<int>(30.0 / dt); ++i) {
      v = step_vehicle(v, delta, dt, cfg.vehicle);
    }
    const double r_ss = steady_state_yaw_rate(v.v_x, delta, cfg.vehicle);
    const double rel = std::abs(v.r - r_ss) / std::abs(r_ss);
    out.push_back(make("steady-state-yaw", rel < 0.005,
                       "relative error " + format_double(rel)));
  }
  {
    VehicleState v;
    v.y = cfg.scenario.geometry.center(cfg.scenario.start_lane);
    v.v_x = cfg.scenario.ego_speed();
    SteeringState s;
    bool exact = true;
    for (int i = 0; i < 6000; ++i) {
      const double alpha = front_slip_angle(v, road_wheel_angle(s.theta_sw, cfg.vehicle),
                                            cfg.vehicle);
      s = step_column_coupled(s, 0.0, 0.0, alpha, dt, cfg.column);
      v = step_vehicle(v, road_wheel_angle(s.theta_sw, cfg.vehicle), dt, cfg.vehicle);
      exact = exact && v.y == cfg.scenario.geometry.center(cfg.scenario.start_lane) &&
              v.psi == 0.0 && v.v_y == 0.0 && v.r == 0.0 && s.theta_sw == 0.0 &&
              s.theta_sw_dot == 0.0;
    }
    out.push_back(make("zero-input-equilibrium", exact, exact ? "exact" : "drifted"));
  }

  episode_checks(cfg, out);

  if (!opt.include_trials) return out;

  const Condition normal{AssistStrength::Strong, 6.0};
  const DriveLog a = run_trial(normal, cfg, opt.seed);
  const DriveLog b = run_trial(normal, cfg, opt.seed);
  out.push_back(make("determinism", to_csv(a) == to_csv(b),
                     std::to_string(a.size()) + " records"));

  {
    const auto segs = segment_lc(a, cfg.scenario.geometry);
    std::vector<double> runs;
    double run = 0.0;
    for (std::size_t i = 0; i < a.records.size(); ++i) {
      if (a.records[i].mode == AssistMode::LC) run += a.dt;
      if ((a.records[i].mode != AssistMode::LC || i + 1 == a.records.size()) && run > 0) {
        runs.push_back(run);
        run = 0.0;
      }
    }
    bool ok = segs.size() == cfg.scenario.events.size() && runs.size() == segs.size();
    for (double r : runs) ok = ok && std::abs(r - normal.delta_T_LC) <= 0.5;
    std::ostringstream d;
    d << segs.size() << " yaw segments, LC-mode runs:";
    for (double r : runs) d << ' ' << std::round(r * 100.0) / 100.0;
    out.push_back(make("compliance", ok, d.str()));
  }
  {
    const std::string trace = check_gain_trace(a);
    out.push_back(make("gain-trace-trial", trace.empty(), trace.empty() ? "ok" : trace));
  }
  if (!cfg.consistency.use_estimated_driver_torque) {
    const double dev = pseudo_work_deviation(a, cfg.consistency.window_s);
    out.push_back(make("pseudo-work-oracle", dev <= 1e-9, "max deviation " + format_double(dev)));
  }
  {
    const DriveLog m = run_trial(Condition{}, cfg, opt.seed);
    const bool zero = std::all_of(m.records.begin(), m.records.end(),
                                  [](const LogRecord& r) { return r.tau_hapa == 0.0; });
    out.push_back(make("manual-zero-torque", zero, std::to_string(m.size()) + " records"));
  }
  {
    TrialConfig fine = cfg;
    fine.scenario.rate_hz = 2.0 * cfg.scenario.rate_hz;
    const DriveLog h = run_trial(normal, fine, opt.seed);
    const double y1 = a.records.back().y;
    const double y2 = h.records.back().y;
    const double rel = std::abs(y2 - y1) / std::abs(y1);
    out.push_back(make("dt-halving", rel < 0.01,
                       "final y " + format_double(y1) + " vs " + format_double(y2)));
  }
  return out;
}

}  // namespace hapsteer
