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

#include "hapsteer/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "hapsteer/errors.hpp"

namespace hapsteer {

namespace {

struct NamedDuration {
  std::string_view name;
  double seconds;
};

constexpr NamedDuration kDurations[] = {{"rapid", 4.0}, {"normal", 6.0}, {"gentle", 8.0}};

std::seed_seq make_seq(std::uint64_t seed, std::uint32_t stream) {
  return std::seed_seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                       stream};
}

}  // namespace

std::string Condition::name() const {
  if (strength == AssistStrength::Manual) return "manual";
  std::string out(to_string(strength));
  out.push_back('-');
  for (const auto& d : kDurations) {
    if (d.seconds == delta_T_LC) return out + std::string(d.name);
  }
  std::ostringstream os;
  os << delta_T_LC << "s";
  return out + os.str();
}

Condition Condition::parse(std::string_view name) {
  for (const Condition& c : table()) {
    if (c.name() == name) return c;
  }
  throw ConfigError("unknown condition '" + std::string(name) + "'");
}

std::vector<Condition> Condition::table() {
  std::vector<Condition> out{{AssistStrength::Manual, 6.0}};
  for (AssistStrength s : {AssistStrength::Strong, AssistStrength::Weak}) {
    for (const auto& d : kDurations) out.push_back({s, d.seconds});
  }
  return out;
}

std::vector<LcEventSpec> default_lc_events() {
  return {{1500.0, 1, true, true},
          {3200.0, 0, true, true},
          {4900.0, 1, false, true},
          {6600.0, 0, true, true}};
}

void ScenarioConfig::validate() const {
  geometry.validate();
  if (!(deficit_min_kmh >= 0 && deficit_max_kmh >= deficit_min_kmh)) {
    throw ConfigError("scenario deficit range is invalid");
  }
  if (!(ego_speed_kmh > 0)) throw ConfigError("scenario ego speed must be positive");
  if (!(deficit_max_kmh * dip_fraction < ego_speed_kmh)) {
    throw ConfigError("scenario speed dip would stop the vehicle");
  }
  if (!(dip_fraction >= 0 && dip_fraction <= 1)) {
    throw ConfigError("scenario dip_fraction must be in [0,1]");
  }
  if (!(dip_gap >= 0 && dip_ramp > 0)) throw ConfigError("scenario dip geometry is invalid");
  if (!geometry.valid_lane(start_lane)) throw ConfigError("scenario start_lane does not exist");
  if (!(rate_hz > 0)) throw ConfigError("scenario rate_hz must be positive");
  if (!(offroad_margin >= 0)) throw ConfigError("scenario offroad_margin must be >= 0");
  if (!(lc_area_buffer_s > 0)) throw ConfigError("scenario lc_area_buffer_s must be positive");

  const double buffer = lc_area_buffer_s * ego_speed();
  const double half_zone = std::max(dip_gap + dip_ramp, 2.0 * buffer);
  double prev_end = 0.0;
  int lane = start_lane;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const LcEventSpec& ev = events[i];
    if (!geometry.valid_lane(ev.target_lane)) {
      throw ConfigError("scenario event " + std::to_string(i) + " targets a missing lane");
    }
    if (std::abs(ev.target_lane - lane) != 1) {
      throw ConfigError("scenario event " + std::to_string(i) +
                        " must target a lane adjacent to the current one");
    }
    lane = ev.target_lane;
    const double begin = ev.trigger_x - half_zone;
    const double end = ev.trigger_x + half_zone;
    if (begin < prev_end) {
      throw ConfigError("scenario event " + std::to_string(i) +
                        " overlaps the previous LC zone or the course start");
    }
    if (end > geometry.course_length) {
      throw ConfigError("scenario event " + std::to_string(i) + " runs past the course end");
    }
    prev_end = end;
  }
}

Course::Course(ScenarioConfig cfg, std::vector<CourseEvent> events)
    : cfg_(std::move(cfg)), events_(std::move(events)) {}

double Course::dip_blend(double x, double trigger, double* slope) const noexcept {
  const double a0 = trigger - cfg_.dip_gap - cfg_.dip_ramp;
  const double a1 = trigger - cfg_.dip_gap;
  const double c0 = trigger + cfg_.dip_gap;
  const double c1 = trigger + cfg_.dip_gap + cfg_.dip_ramp;
  const double w = std::numbers::pi / cfg_.dip_ramp;
  *slope = 0.0;
  if (x <= a0 || x >= c1) return 0.0;
  if (x < a1) {
    *slope = 0.5 * w * std::sin(w * (x - a0));
    return 0.5 * (1.0 - std::cos(w * (x - a0)));
  }
  if (x <= c0) return 1.0;
  *slope = -0.5 * w * std::sin(w * (x - c0));
  return 0.5 * (1.0 + std::cos(w * (x - c0)));
}

double Course::speed(double x) const noexcept {
  double v = cfg_.ego_speed();
  double slope = 0.0;
  for (const CourseEvent& ev : events_) {
    v -= cfg_.dip_fraction * ev.deficit_kmh / 3.6 * dip_blend(x, ev.spec.trigger_x, &slope);
  }
  return v;
}

double Course::accel(double x) const noexcept {
  double dv_dx = 0.0;
  double slope = 0.0;
  for (const CourseEvent& ev : events_) {
    dip_blend(x, ev.spec.trigger_x, &slope);
    dv_dx -= cfg_.dip_fraction * ev.deficit_kmh / 3.6 * slope;
  }
  return speed(x) * dv_dx;
}

IntentSchedule Course::intent_schedule() const {
  IntentSchedule out;
  for (const CourseEvent& ev : events_) {
    out.push_back({ev.spec.trigger_x, ev.spec.target_lane, ev.spec.comply_with_assist});
  }
  return out;
}

std::vector<double> Course::crossings() const {
  std::vector<double> out;
  for (const CourseEvent& ev : events_) out.push_back(ev.crossing_x);
  return out;
}

std::vector<std::pair<double, double>> Course::lc_areas() const {
  const double buffer = cfg_.lc_area_buffer_s * cfg_.ego_speed();
  std::vector<std::pair<double, double>> out;
  for (const CourseEvent& ev : events_) {
    out.emplace_back(ev.spec.trigger_x - buffer, ev.spec.trigger_x + 2.0 * buffer);
  }
  return out;
}

Course build_course(const ScenarioConfig& cfg, double driver_lc_duration, std::uint64_t seed) {
  cfg.validate();
  if (!(driver_lc_duration > 0)) throw ConfigError("driver lc_duration must be positive");
  auto seq = make_seq(seed, 0x636f7572u);
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> deficit(cfg.deficit_min_kmh, cfg.deficit_max_kmh);

  std::vector<CourseEvent> events;
  for (const LcEventSpec& spec : cfg.events) {
    CourseEvent ev;
    ev.spec = spec;
    // Draw for every event so free changes do not shift later deficits.
    const double d = deficit(rng);
    ev.deficit_kmh = spec.lead_vehicle ? d : 0.0;
    events.push_back(ev);
  }
  Course course(cfg, events);
  std::vector<CourseEvent> located = course.events();
  for (CourseEvent& ev : located) {
    ev.crossing_x =
        ev.spec.trigger_x + 0.5 * course.speed(ev.spec.trigger_x) * driver_lc_duration;
  }
  return Course(cfg, std::move(located));
}

void TrialConfig::validate() const {
  vehicle.validate();
  column.validate();
  consistency.validate();
  authority.validate();
  driver.validate();
  scenario.validate();
  if (!(controller.tau_max > 0)) throw ConfigError("controller tau_max must be positive");
  if (!(controller.weak_factor > 0 && controller.weak_factor <= 1)) {
    throw ConfigError("controller weak_factor must be in (0,1]");
  }
  if (!(preview.T_preview > 0)) throw ConfigError("preview T_preview must be positive");
  if (!(preview.cutoff_hz > 0)) throw ConfigError("preview cutoff_hz must be positive");
  if (!(intent_window_s * scenario.rate_hz >= 1)) throw ConfigError("intent window is empty");
  if (predictor.kind != "oracle" && predictor.kind != "heuristic" &&
      predictor.kind != "external") {
    throw ConfigError("predictor kind must be oracle, heuristic or external");
  }
  if (predictor.kind == "external" && predictor.command.empty()) {
    throw ConfigError("external predictor needs a command");
  }
}

std::unique_ptr<IntentPredictor> make_predictor(const PredictorSpec& spec, const Course& course) {
  if (spec.kind == "oracle") {
    return std::make_unique<OraclePredictor>(course.crossings(), spec.horizon_s);
  }
  if (spec.kind == "heuristic") {
    HeuristicThresholds th = spec.heuristic;
    th.horizon_s = spec.horizon_s;
    th.sample_rate_hz = course.config().rate_hz;
    return std::make_unique<HeuristicPredictor>(th);
  }
  if (spec.kind == "external") return make_process_predictor(spec.command);
  throw ConfigError("unknown predictor kind '" + spec.kind + "'");
}

namespace {

double adjacent_boundary_distance(double y, const LaneGeometry& g) {
  const int lane = g.lane_of(y);
  double d = std::numeric_limits<double>::infinity();
  if (g.valid_lane(lane + 1)) d = std::min(d, (lane + 1) * g.lane_width - y);
  if (g.valid_lane(lane - 1)) d = std::min(d, y - lane * g.lane_width);
  return std::isfinite(d) ? d : 0.0;
}

bool in_windows(double t, const std::vector<std::pair<double, double>>& windows) {
  for (const auto& [a, b] : windows) {
    if (t >= a && t < b) return true;
  }
  return false;
}

}  // namespace

DriveLog run_trial(const Condition& condition, const TrialConfig& cfg, std::uint64_t seed,
                   const TrialOptions& options) {
  cfg.validate();
  const ScenarioConfig& sc = cfg.scenario;
  const LaneGeometry& geo = sc.geometry;
  const double dt = sc.dt();

  const Course course = build_course(sc, cfg.driver.lc_duration, seed);
  std::shared_ptr<const IntentPredictor> predictor = options.predictor;
  if (!predictor) predictor = make_predictor(cfg.predictor, course);

  FeatureWindow window(static_cast<std::size_t>(std::lround(cfg.intent_window_s * sc.rate_hz)));
  ConsistencyDetector detector(cfg.consistency, dt);
  AuthorityState authority = initial_authority(cfg.authority);
  TrajectoryPlan plan = plan_lane_keep(sc.start_lane, geo);
  PreviewTracker tracker(cfg.preview);
  HapticController controller(cfg.controller, cfg.column, cfg.vehicle);
  DriverModel driver(cfg.driver, course.intent_schedule(), geo, sc.start_lane, seed, dt);

  VehicleState vehicle;
  vehicle.y = geo.center(sc.start_lane);
  vehicle.v_x = course.speed(0.0);
  SteeringState steer;

  std::vector<double> forced = options.forced_intent_times;
  std::sort(forced.begin(), forced.end());
  std::size_t next_forced = 0;

  DriveLog log;
  log.condition = condition.name();
  log.seed = seed;
  log.dt = dt;
  log.records.reserve(static_cast<std::size_t>(geo.course_length / sc.ego_speed() / dt * 1.05));

  double prev_tau_hapi = 0.0;
  double prev_tau_dr = 0.0;
  double prev_tau_dr_hat = 0.0;
  double prev_e_theta_dot = 0.0;
  double prev_e_theta = 0.0;
  double head = 0.0;

  const std::size_t max_steps = static_cast<std::size_t>(1e7);
  for (std::size_t i = 0; i < max_steps; ++i) {
    const double t = static_cast<double>(i) * dt;
    if (vehicle.x >= geo.course_length) break;
    if (options.stop_time && t > *options.stop_time) break;

    // 1. sense
    FeatureSample fs;
    fs.head = head;
    fs.a = course.accel(vehicle.x);
    fs.v = vehicle.v_x;
    fs.theta_sw = steer.theta_sw;
    fs.d_adj = adjacent_boundary_distance(vehicle.y, geo);
    fs.psi = vehicle.psi;
    window.push(fs);

    // 2. intent
    int intent = predict(*predictor, window, {t, vehicle.x, vehicle.v_x});
    if (next_forced < forced.size() && t >= forced[next_forced]) {
      intent = 1;
      ++next_forced;
    }

    // 3. consistency over the previous step's efforts
    if (i > 0) {
      const double tau_dr =
          cfg.consistency.use_estimated_driver_torque ? prev_tau_dr_hat : prev_tau_dr;
      detector.update(prev_tau_hapi, tau_dr, prev_e_theta_dot);
    }
    const ConsistencyState& cs = detector.state();

    // 4. authority
    authority = step_gain(authority, cs.verdict, dt, cfg.authority);
    ModeInputs mi;
    mi.intent = intent;
    mi.delta_T_LC = condition.delta_T_LC;
    mi.lateral_rate = vehicle.v_x * std::sin(vehicle.psi) + vehicle.v_y * std::cos(vehicle.psi);
    mi.e_theta = prev_e_theta;
    mi.head_yaw = head;
    ModeResult mr = step_mode(authority, mi, plan, vehicle, geo, cfg.authority);
    authority = mr.state;
    if (options.on_event) {
      if (mr.lc_completed) options.on_event(t, "lc_completed");
      if (mr.replanned_now) options.on_event(t, "replanned");
      if (mr.lc_started) options.on_event(t, "lc_started");
    }
    if (mr.lc_started || mr.lc_completed || mr.replanned_now) {
      plan = mr.plan;
      tracker.reset_memory();
      controller.reset_reference();
    }

    // 5. + 6.
    const PreviewErrors e = tracker.update(vehicle, plan, dt);
    const TorqueBreakdown tq =
        controller.step(vehicle, steer, e, plan, authority.K_h, condition.strength, dt);

    // 7. driver
    driver.set_resisting(in_windows(t, options.resist_windows));
    const TrajectoryPlan* felt = condition.strength == AssistStrength::Manual ? nullptr : &plan;
    const DriverOutput drv = driver.step(vehicle, steer, t, felt);
    head = drv.head_yaw;

    // 8. log, then integrate
    LogRecord rec;
    rec.t = t;
    rec.x = vehicle.x;
    rec.y = vehicle.y;
    rec.psi = vehicle.psi;
    rec.v_x = vehicle.v_x;
    rec.v_y = vehicle.v_y;
    rec.r = vehicle.r;
    rec.theta_sw = steer.theta_sw;
    rec.theta_sw_dot = steer.theta_sw_dot;
    rec.tau_driver = drv.tau_driver;
    rec.tau_hapi = tq.tau_hapi;
    rec.tau_hapa = tq.tau_hapa;
    rec.K_h = authority.K_h;
    rec.mode = authority.mode;
    rec.verdict = authority.verdict;
    rec.intent = intent;
    rec.e_y = e.e_y;
    rec.e_theta = e.e_theta;
    rec.e_theta_dot = e.e_theta_dot;
    rec.W_hapi = cs.W_hapi;
    rec.W_dr = cs.W_dr;
    rec.S_c = cs.S_c;
    rec.head_yaw = drv.head_yaw;
    rec.lane_id = geo.lane_of(vehicle.y);
    log.records.push_back(rec);

    prev_tau_hapi = tq.tau_hapi;
    prev_tau_dr = drv.tau_driver;
    prev_tau_dr_hat = tq.tau_dr_hat;
    prev_e_theta_dot = e.e_theta_dot;
    prev_e_theta = e.e_theta;

    const double alpha =
        front_slip_angle(vehicle, road_wheel_angle(steer.theta_sw, cfg.vehicle), cfg.vehicle);
    steer = step_column_coupled(steer, drv.tau_driver, tq.tau_hapa, alpha, dt, cfg.column);
    vehicle = step_vehicle(vehicle, road_wheel_angle(steer.theta_sw, cfg.vehicle), dt,
                           cfg.vehicle);
    vehicle.v_x = course.speed(vehicle.x);

    if (vehicle.y < -sc.offroad_margin || vehicle.y > geo.road_width() + sc.offroad_margin) {
      std::ostringstream os;
      os << "vehicle left the road at t=" << t + dt << " s, x=" << vehicle.x
         << " m, y=" << vehicle.y << " m (" << log.condition << ", seed " << seed << ")";
      throw TrialAborted(os.str(), t + dt, vehicle.x, vehicle.y);
    }
  }
  return log;
}

std::vector<TrialOutcome> run_matrix(const std::vector<Condition>& conditions,
                                     const TrialConfig& cfg,
                                     const std::vector<std::uint64_t>& seeds, unsigned jobs,
                                     const TrialSink& sink) {
  std::vector<TrialOutcome> outcomes;
  for (const Condition& c : conditions) {
    for (std::uint64_t s : seeds) outcomes.push_back({c, s, false, {}});
  }

  std::atomic<std::size_t> next{0};
  std::mutex sink_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= outcomes.size()) return;
      TrialOutcome& out = outcomes[k];
      DriveLog log;
      try {
        log = run_trial(out.condition, cfg, out.seed);
        out.ok = true;
      } catch (const std::exception& ex) {
        out.error = ex.what();
        log = DriveLog{};
      }
      if (sink) {
        std::lock_guard lock(sink_mutex);
        sink(out, std::move(log));
      }
    }
  };

  const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(outcomes.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return outcomes;
}

std::vector<DriveLog> run_matrix(const std::vector<Condition>& conditions,
                                 const TrialConfig& cfg,
                                 const std::vector<std::uint64_t>& seeds, unsigned jobs) {
  std::vector<DriveLog> logs(conditions.size() * seeds.size());
  std::vector<std::pair<std::string, std::uint64_t>> keys;
  for (const Condition& c : conditions) {
    for (std::uint64_t s : seeds) keys.emplace_back(c.name(), s);
  }
  const auto outcomes =
      run_matrix(conditions, cfg, seeds, jobs, [&](const TrialOutcome& o, DriveLog&& log) {
        if (!o.ok) return;
        for (std::size_t k = 0; k < keys.size(); ++k) {
          if (keys[k].first == log.condition && keys[k].second == o.seed) {
            logs[k] = std::move(log);
            break;
          }
        }
      });
  for (const TrialOutcome& o : outcomes) {
    if (!o.ok) throw std::runtime_error(o.condition.name() + " seed " + std::to_string(o.seed) +
                                        ": " + o.error);
  }
  return logs;
}

}  // namespace hapsteer
