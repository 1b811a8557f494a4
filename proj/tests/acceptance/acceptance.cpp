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

// Runs the ten acceptance criteria and prints one PASS/FAIL line for each.
// Exit status is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "hapsteer/authority.hpp"
#include "hapsteer/consistency.hpp"
#include "hapsteer/drive_log.hpp"
#include "hapsteer/metrics.hpp"
#include "hapsteer/scenario.hpp"
#include "hapsteer/trajectory.hpp"
#include "hapsteer/verify.hpp"
#include "hapsteer_cli/cli.hpp"
#include "synthetic_log.hpp"

namespace fs = std::filesystem;
using namespace hapsteer;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "first failure: " << what << "; ";
      pass = false;
    }
  }
};

// K_h in [0, 1] and monotone while the verdict is unchanged.
std::string gain_trace_problem(const DriveLog& log) {
  const auto& r = log.records;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i].K_h < 0.0 || r[i].K_h > 1.0) return "K_h out of range";
    if (i == 0 || r[i].verdict != r[i - 1].verdict) continue;
    const double d = r[i].K_h - r[i - 1].K_h;
    if (r[i].verdict == Verdict::Inconsistent && d > 0) return "K_h rose while inconsistent";
    if (r[i].verdict == Verdict::Consistent && d < 0) return "K_h fell while consistent";
  }
  return {};
}

std::vector<double> lc_mode_runs(const DriveLog& log) {
  std::vector<double> runs;
  std::size_t n = 0;
  for (std::size_t i = 0; i <= log.records.size(); ++i) {
    if (i < log.records.size() && log.records[i].mode == AssistMode::LC) {
      ++n;
    } else if (n > 0) {
      runs.push_back(static_cast<double>(n) * log.dt);
      n = 0;
    }
  }
  return runs;
}

// What criteria 1, 6 and 8 need from each matrix trial.
struct MatrixTally {
  std::map<std::string, std::vector<double>> sdlp;          // one per trial
  std::map<std::string, std::vector<double>> lc_durations;  // one per completed change
  std::vector<std::string> gain_problems;
  std::vector<std::string> compliance_problems;
  int failed_trials = 0;
  double seconds = 0.0;
};

MatrixTally run_default_matrix(const TrialConfig& cfg) {
  MatrixTally tally;
  const auto areas = build_course(cfg.scenario, cfg.driver.lc_duration, 0).lc_areas();
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = 1; s <= 12; ++s) seeds.push_back(s);
  const unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  const auto t0 = std::chrono::steady_clock::now();
  run_matrix(Condition::table(), cfg, seeds, jobs, [&](const TrialOutcome& o, DriveLog&& log) {
    if (!o.ok) {
      ++tally.failed_trials;
      return;
    }
    const std::string name = o.condition.name();
    const TrialReport rep = evaluate_trial(log, cfg.scenario.geometry, areas);
    tally.sdlp[name].push_back(rep.sdlp);
    for (const LcMeasure& m : rep.lane_changes) {
      if (!m.segment.truncated) tally.lc_durations[name].push_back(m.stats.duration);
    }
    const std::string g = gain_trace_problem(log);
    if (!g.empty()) tally.gain_problems.push_back(name + "/" + std::to_string(o.seed) + ": " + g);

    if (name == "strong-normal") {
      const auto segs = segment_lc(log, cfg.scenario.geometry);
      const auto runs = lc_mode_runs(log);
      bool ok = segs.size() == 4 && runs.size() == 4;
      for (double r : runs) ok = ok && std::abs(r - 6.0) <= 0.5;
      if (!ok) tally.compliance_problems.push_back("strong-normal seed " + std::to_string(o.seed));
    }
    if (name == "manual") {
      for (const LogRecord& r : log.records) {
        if (r.tau_hapa != 0.0) {
          tally.compliance_problems.push_back("manual seed " + std::to_string(o.seed) +
                                              " has haptic torque");
          break;
        }
      }
    }
  });
  tally.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return tally;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? std::nan("") : s / static_cast<double>(v.size());
}

Outcome gain_schedule(const MatrixTally& tally, const DriveLog& episode) {
  Outcome o;
  const AuthorityParams p;
  const double endpoint = 0.5 * (1.0 + std::tanh(-4.0));
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_mid = 0.0, worst_dec = 0.0, worst_rec = 0.0;
  for (int i = 0; i < 1000; ++i) {
    double ks = u(rng);
    while (ks == 0.0) ks = u(rng);
    worst_mid = std::max(worst_mid, std::abs(gain_inconsistent(ks, 1.0, p) - ks / 2));
    // Decay curve starts ks * endpoint below ks; the recovery curve starts
    // (1 - ks) * endpoint above it.
    const double dec = std::abs(gain_inconsistent(ks, 0.0, p) - ks);
    const double rec = std::abs(gain_consistent(ks, 0.0, p) - ks);
    o.require(dec <= ks * 3.36e-4, "decay start off by " + std::to_string(dec));
    o.require(rec <= (1.0 - ks) * 3.36e-4, "recovery start off by " + std::to_string(rec));
    o.require(std::abs(dec - ks * endpoint) <= 1e-15, "decay offset not ks * endpoint");
    o.require(std::abs(rec - (1.0 - ks) * endpoint) <= 1e-15, "recovery offset mismatch");
    worst_dec = std::max(worst_dec, dec / ks);
    worst_rec = std::max(worst_rec, rec / (1.0 - ks));
  }
  o.require(worst_mid <= 1e-12, "midpoint deviation " + std::to_string(worst_mid));
  for (const std::string& g : tally.gain_problems) o.require(false, g);
  const std::string e = gain_trace_problem(episode);
  o.require(e.empty(), "episode: " + e);
  o.detail << "max |K(gamma) - Ks/2| " << worst_mid << ", start offsets / weight " << worst_dec
           << " and " << worst_rec << ", gain traces of 84 trials + episode checked";
  return o;
}

Outcome bezier_boundaries() {
  Outcome o;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> speed(5.0, 40.0), dur(2.0, 10.0), width(2.5, 4.5);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double vx = speed(rng), T = dur(rng), d = width(rng);
    const LaneGeometry g{d, 2};
    const double y0 = g.center(0), y1 = g.center(1);
    const double x0 = 123.0 * i;
    const auto plan = plan_lane_change(x0, y0, y1, vx, T);
    if (!plan) {
      o.require(false, "no plan");
      continue;
    }
    o.require(plan->length == vx * T, "L != v_x * dT");
    o.require(std::abs(std::abs(plan->y_end - plan->y_start) - d) <= 1e-12, "|y_end - y_start| != d");
    // Bernstein derivatives from the control points.
    const auto& P = plan->control_points;
    const double L = plan->length;
    const double ya = P[0].y, yb = P[5].y;
    const double d1a = 5.0 * (P[1].y - P[0].y) / L, d1b = 5.0 * (P[5].y - P[4].y) / L;
    const double d2a = 20.0 * (P[2].y - 2 * P[1].y + P[0].y) / (L * L);
    const double d2b = 20.0 * (P[5].y - 2 * P[4].y + P[3].y) / (L * L);
    // And the evaluator just inside each end, close enough that the curve
    // itself moves y'' by well under the tolerance.
    const double eps = 1e-12 * L * L * L;
    const ReferenceSample in_a = eval(*plan, x0 + eps);
    const ReferenceSample in_b = eval(*plan, x0 + L - eps);
    for (double err : {ya - y0, yb - y1, d1a, d1b, d2a, d2b, in_a.y_ref - y0, in_b.y_ref - y1,
                       in_a.dy_dx, in_b.dy_dx, in_a.d2y_dx2, in_b.d2y_dx2}) {
      worst = std::max(worst, std::abs(err));
    }
  }
  o.require(worst <= 1e-9, "boundary error " + std::to_string(worst * 1e9) + "e-9");
  o.detail << "100 plans, worst boundary error " << worst;
  return o;
}

Outcome truth_table() {
  Outcome o;
  const double delta = 0.05;
  int cases = 0;
  for (double s : {-0.7, 0.0, 0.7}) {
    for (double beta : {0.5 * delta, delta, 3.0 * delta}) {
      const bool inconsistent = s < 0.0 && beta > delta;
      const Verdict want = inconsistent ? Verdict::Inconsistent : Verdict::Consistent;
      ConsistencyState st;
      st.S_c = s;
      st.beta = beta;
      o.require(classify(s, beta, delta) == want && classify(st, delta) == want,
                "S_c=" + std::to_string(s) + " beta=" + std::to_string(beta));
      ++cases;
    }
  }
  o.detail << cases << " cases";
  return o;
}

Outcome pseudo_work(const TrialConfig& cfg) {
  Outcome o;
  const DriveLog log = run_trial({AssistStrength::Strong, 6.0}, cfg, 1);
  const auto n = static_cast<std::size_t>(std::lround(cfg.consistency.window_s / log.dt));
  const double span = static_cast<double>(n) * log.dt;
  const auto& r = log.records;
  double worst = 0.0;
  // Row i carries the window over rows i-1-n .. i-1 (the detector sees the
  // previous step's torques).
  for (std::size_t i = 1; i < r.size(); ++i) {
    const std::size_t last = i - 1;
    const std::size_t first = last >= n ? last - n : 0;
    long double wh = 0.0L, wd = 0.0L;
    for (std::size_t k = first; k < last; ++k) {
      wh += 0.5L * log.dt * (r[k].tau_hapi * r[k].e_theta_dot + r[k + 1].tau_hapi * r[k + 1].e_theta_dot);
      wd += 0.5L * log.dt * (r[k].tau_driver * r[k].e_theta_dot + r[k + 1].tau_driver * r[k + 1].e_theta_dot);
    }
    worst = std::max(worst, std::abs(static_cast<double>(wh / span) - r[i].W_hapi));
    worst = std::max(worst, std::abs(static_cast<double>(wd / span) - r[i].W_dr));
  }
  o.require(worst <= 1e-9, "trial deviation " + std::to_string(worst));

  ConsistencyDetector det(ConsistencyParams{}, 1.0 / 60.0);
  double w = 0.0;
  for (int i = 0; i <= 60; ++i) {
    const double v = std::sin(2.0 * std::numbers::pi * i / 60.0);
    w = det.update(v, 0.0, v).W_hapi;
  }
  o.require(std::abs(w - 0.5) <= 1e-6, "sin^2 window gives " + std::to_string(w));
  o.detail << r.size() << " rows, worst deviation " << worst << ", sin^2 mean " << w;
  return o;
}

Outcome episode(const TrialConfig& cfg, DriveLog* keep) {
  Outcome o;
  const EpisodeReport rep = run_false_lc_episode(cfg);
  const auto& r = rep.log.records;
  *keep = rep.log;
  if (!rep.guidance_onset) {
    o.require(false, "guidance never started a lane change");
    return o;
  }
  const double onset = *rep.guidance_onset;
  double t_switch = NAN, t_collapse = NAN, t_back = NAN, t_recovered = NAN;
  double jump_in = 0.0, jump_out = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (i > 0 && r[i].verdict != r[i - 1].verdict) {
      const double j = std::abs(r[i].K_h - r[i - 1].K_h);
      (r[i].verdict == Verdict::Inconsistent ? jump_in : jump_out) =
          std::max(r[i].verdict == Verdict::Inconsistent ? jump_in : jump_out, j);
    }
    if (r[i].t < onset) continue;
    if (std::isnan(t_switch)) {
      if (r[i].verdict == Verdict::Inconsistent) t_switch = r[i].t;
      continue;
    }
    if (std::isnan(t_collapse) && r[i].K_h < 0.02) t_collapse = r[i].t;
    if (std::isnan(t_back)) {
      if (r[i].verdict == Verdict::Consistent) t_back = r[i].t;
      continue;
    }
    if (std::isnan(t_recovered) && r[i].K_h > 0.99) t_recovered = r[i].t;
  }
  const double dt = rep.log.dt;
  const double sech = 1.0 / std::cosh(4.0 * (dt - 1.0));
  const double bound = 3.4e-4 + dt * 0.5 * 4.0 * sech * sech;
  o.require(t_switch - onset <= 1.5, "switch " + std::to_string(t_switch - onset) + " s after onset");
  o.require(t_collapse - t_switch <= 2.0, "collapse " + std::to_string(t_collapse - t_switch) + " s after switch");
  o.require(rep.replans == 1, "replans = " + std::to_string(rep.replans));
  o.require(t_recovered - t_back <= 3.0, "recovery " + std::to_string(t_recovered - t_back) + " s");
  o.require(jump_in > 0 && jump_in <= bound, "jump into inconsistent " + std::to_string(jump_in));
  o.require(jump_out > 0 && jump_out <= bound, "jump into consistent " + std::to_string(jump_out));
  o.detail << "onset " << onset << " s, switch +" << t_switch - onset << " s, collapse +"
           << t_collapse - t_switch << " s, replans " << rep.replans << ", recovered +"
           << t_recovered - t_back << " s, max jumps " << jump_in << " / " << jump_out
           << " (bound " << bound << ")";
  return o;
}

Outcome directional(const MatrixTally& t) {
  Outcome o;
  o.require(t.failed_trials == 0, std::to_string(t.failed_trials) + " trials failed");
  const double manual = mean(t.sdlp.at("manual"));
  double strong = 0.0, weak = 0.0;
  for (const char* d : {"rapid", "normal", "gentle"}) {
    strong += mean(t.sdlp.at(std::string("strong-") + d)) / 3.0;
    weak += mean(t.sdlp.at(std::string("weak-") + d)) / 3.0;
  }
  o.require(strong < manual, "SDLP strong >= manual");
  o.require(weak < manual, "SDLP weak >= manual");
  auto dur = [&](const std::string& c) { return mean(t.lc_durations.at(c)); };
  for (const char* s : {"strong", "weak"}) {
    const std::string p(s);
    o.require(dur(p + "-rapid") < dur(p + "-normal"), p + ": rapid >= normal");
    o.require(dur(p + "-normal") < dur(p + "-gentle"), p + ": normal >= gentle");
  }
  o.require(dur("strong-normal") < dur("manual"), "strong-normal duration >= manual");
  o.require(t.seconds < 60.0, "matrix took " + std::to_string(t.seconds) + " s");
  o.detail << "SDLP manual " << manual << " strong " << strong << " weak " << weak
           << "; LC s: manual " << dur("manual") << ", strong " << dur("strong-rapid") << "/"
           << dur("strong-normal") << "/" << dur("strong-gentle") << ", weak "
           << dur("weak-rapid") << "/" << dur("weak-normal") << "/" << dur("weak-gentle")
           << "; 84 trials in " << t.seconds << " s";
  return o;
}

Outcome metric_oracles() {
  Outcome o;
  using hapsteer::testing::brute_reversals;
  using hapsteer::testing::brute_sd;
  using hapsteer::testing::close_rel;
  for (std::uint64_t seed = 100; seed < 150; ++seed) {
    const DriveLog log = hapsteer::testing::random_log(seed);
    const auto& r = log.records;
    std::vector<double> y, th;
    for (const auto& x : r) {
      y.push_back(x.y);
      th.push_back(x.theta_sw);
    }
    const double minutes = static_cast<double>(r.size()) * log.dt / 60.0;
    o.require(close_rel(sdlp(y), brute_sd(y), 1e-12), "sdlp");
    o.require(close_rel(swrr(th, 3 * kDeg, minutes * 60.0),
                        static_cast<double>(brute_reversals(th, 3 * kDeg)) / minutes, 1e-12),
              "swrr");

    LcSegment seg;
    seg.begin = 300 + seed;
    seg.end = 1200 + seed;
    seg.start_t = r[seg.begin].t;
    seg.end_t = r[seg.end].t;
    long double ss = 0.0L, tq = 0.0L;
    double peak = 0.0, ov = 0.0;
    for (std::size_t i = seg.begin; i <= seg.end; ++i) {
      ss += static_cast<long double>(r[i].theta_sw_dot) * r[i].theta_sw_dot;
      peak = std::max(peak, std::abs(r[i].theta_sw));
    }
    for (const auto& x : r) {
      tq += static_cast<long double>(x.tau_driver) * x.tau_driver;
      if (x.t >= seg.end_t && x.t <= seg.end_t + 3.0) ov = std::max(ov, std::abs(x.y - 5.25));
    }
    const LcStats st = lc_stats(log, seg);
    const double n = static_cast<double>(seg.end - seg.begin + 1);
    o.require(close_rel(st.rms_steer_vel, static_cast<double>(std::sqrt(ss / n)), 1e-12), "rms");
    o.require(close_rel(st.peak_angle, peak, 1e-12), "peak");
    o.require(close_rel(overshoot(log, seg, 5.25).value, ov, 1e-12), "overshoot");
    o.require(close_rel(driver_torque_rms(log),
                        static_cast<double>(std::sqrt(tq / static_cast<double>(r.size()))), 1e-12),
              "torque rms");
  }
  auto tri = [](double amp_deg) {
    std::vector<double> v;
    for (int i = 0; i < 3600; ++i) {
      const double ph = std::fmod(i / 120.0 + 0.25, 1.0);
      v.push_back(amp_deg * kDeg * (ph < 0.5 ? 4 * ph - 1 : 3 - 4 * ph));
    }
    return v;
  };
  const double big = swrr(tri(10.0), 3 * kDeg, 60.0);
  const double small = swrr(tri(1.0), 3 * kDeg, 60.0);
  o.require(big == 60.0, "10 deg triangle gives " + std::to_string(big));
  o.require(small == 0.0, "1 deg triangle gives " + std::to_string(small));
  o.detail << "50 synthetic logs; triangle waves " << big << " and " << small << " per min";
  return o;
}

Outcome compliance(const MatrixTally& t) {
  Outcome o;
  for (const std::string& p : t.compliance_problems) o.require(false, p);
  o.detail << "strong-normal: 4 changes of 6 +- 0.5 s on 12 seeds; manual: zero haptic torque";
  return o;
}

std::string read_file(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), {}};
}

Outcome determinism(const TrialConfig& cfg) {
  Outcome o;
  const fs::path root = fs::temp_directory_path() / "hapsteer_acceptance_determinism";
  fs::remove_all(root);
  std::ostringstream sink;
  const std::string jobs = std::to_string(std::max(2u, std::thread::hardware_concurrency()));
  const int a = cli::run({"matrix", "--jobs", "1", "--out", (root / "a").string()}, sink, sink);
  const int b = cli::run({"matrix", "--jobs", jobs, "--out", (root / "b").string()}, sink, sink);
  o.require(a == 0 && b == 0, "matrix command failed");
  std::size_t csvs = 0, compared = 0;
  for (const auto& e : fs::directory_iterator(root / "a")) {
    const auto name = e.path().filename();
    if (name.extension() == ".csv") ++csvs;
    const fs::path other = root / "b" / name;
    o.require(fs::exists(other) && read_file(e.path()) == read_file(other),
              name.string() + " differs between --jobs 1 and --jobs " + jobs);
    ++compared;
  }
  // 84 logs plus summary.csv and reports.csv
  o.require(csvs == 86, std::to_string(csvs) + " csv files");
  const DriveLog x = run_trial({AssistStrength::Weak, 8.0}, cfg, 11);
  const DriveLog y = run_trial({AssistStrength::Weak, 8.0}, cfg, 11);
  o.require(to_csv(x) == to_csv(y), "repeated run differs");
  fs::remove_all(root);
  o.detail << compared << " files identical across --jobs 1 and --jobs " << jobs
           << ", repeated run identical";
  return o;
}

// Steady state of the linear single-track model solved directly.
double analytic_yaw_rate(double vx, double delta, const VehicleParams& p) {
  const double a11 = -(p.C_f + p.C_r) / (p.m * vx);
  const double a12 = (p.C_r * p.l_r - p.C_f * p.l_f) / (p.m * vx) - vx;
  const double a21 = (p.l_r * p.C_r - p.l_f * p.C_f) / (p.I_z * vx);
  const double a22 = -(p.l_f * p.l_f * p.C_f + p.l_r * p.l_r * p.C_r) / (p.I_z * vx);
  const double b1 = -p.C_f / p.m * delta;
  const double b2 = -p.l_f * p.C_f / p.I_z * delta;
  return (a11 * b2 - a21 * b1) / (a11 * a22 - a12 * a21);
}

Outcome dynamics_sanity(const TrialConfig& cfg) {
  Outcome o;
  const double dt = cfg.scenario.dt();
  VehicleState v;
  v.v_x = cfg.scenario.ego_speed();
  for (int i = 0; i < 60 * 30; ++i) v = step_vehicle(v, 0.02, dt, cfg.vehicle);
  const double r_ss = analytic_yaw_rate(v.v_x, 0.02, cfg.vehicle);
  const double rel = std::abs(v.r - r_ss) / std::abs(r_ss);
  o.require(rel < 0.005, "yaw rate off by " + std::to_string(rel));

  VehicleState z;
  z.y = 1.75;
  z.v_x = v.v_x;
  SteeringState s;
  bool exact = true;
  for (int i = 0; i < 60 * 60; ++i) {
    const double a = front_slip_angle(z, road_wheel_angle(s.theta_sw, cfg.vehicle), cfg.vehicle);
    s = step_column_coupled(s, 0.0, 0.0, a, dt, cfg.column);
    z = step_vehicle(z, road_wheel_angle(s.theta_sw, cfg.vehicle), dt, cfg.vehicle);
    exact = exact && z.y == 1.75 && z.psi == 0.0 && z.v_y == 0.0 && z.r == 0.0 &&
            s.theta_sw == 0.0 && s.theta_sw_dot == 0.0;
  }
  o.require(exact, "zero input drifted");

  const Condition c{AssistStrength::Strong, 6.0};
  const DriveLog coarse = run_trial(c, cfg, 1);
  TrialConfig fine_cfg = cfg;
  fine_cfg.scenario.rate_hz *= 2.0;
  const DriveLog fine = run_trial(c, fine_cfg, 1);
  const double y1 = coarse.records.back().y, y2 = fine.records.back().y;
  const double change = std::abs(y2 - y1) / std::abs(y1);
  o.require(change < 0.01, "halving dt moved final y by " + std::to_string(change));
  o.detail << "yaw rate rel. error " << rel << ", equilibrium exact, dt/2 changes final y by "
           << change;
  return o;
}

}  // namespace

int main() {
  const TrialConfig cfg;
  int failures = 0;
  auto report = [&](int id, const std::string& name, const std::function<Outcome()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o = fn();
    const double s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failures;
    std::printf("%s  %2d  %-28s %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", id, name.c_str(),
                o.detail.str().c_str(), s);
    std::fflush(stdout);
  };

  MatrixTally tally;
  DriveLog episode_log;
  // Criterion 5 and the matrix come first; criteria 1, 6 and 8 read their logs.
  const auto t0 = std::chrono::steady_clock::now();
  Outcome ep = episode(cfg, &episode_log);
  const double ep_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  ep.require(ep_seconds < 5.0, "episode took " + std::to_string(ep_seconds) + " s");
  ep.detail << ", ran in " << ep_seconds << " s";
  tally = run_default_matrix(cfg);

  report(1, "gain-schedule-exactness", [&] { return gain_schedule(tally, episode_log); });
  report(2, "bezier-boundaries", [] { return bezier_boundaries(); });
  report(3, "consistency-truth-table", [] { return truth_table(); });
  report(4, "pseudo-work-oracle", [&] { return pseudo_work(cfg); });
  report(5, "false-lane-change-episode", [&] {
    Outcome o;
    o.pass = ep.pass;
    o.detail << ep.detail.str();
    return o;
  });
  report(6, "directional-reproduction", [&] { return directional(tally); });
  report(7, "metric-oracles", [] { return metric_oracles(); });
  report(8, "scenario-compliance", [&] { return compliance(tally); });
  report(9, "determinism", [&] { return determinism(cfg); });
  report(10, "dynamics-sanity", [&] { return dynamics_sanity(cfg); });

  std::printf("%d of 10 criteria failed\n", failures);
  return failures;
}
