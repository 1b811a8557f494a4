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

#include "hapsteer/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <variant>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "hapsteer/errors.hpp"

namespace hapsteer {

namespace {

using Slot = std::variant<double*, int*, bool*, std::string*>;

struct Binding {
  const char* section;
  const char* key;
  Slot slot;
};

std::vector<Binding> bindings(SimConfig& c) {
  TrialConfig& t = c.trial;
  return {
      {"vehicle", "m", &t.vehicle.m},
      {"vehicle", "I_z", &t.vehicle.I_z},
      {"vehicle", "l_f", &t.vehicle.l_f},
      {"vehicle", "l_r", &t.vehicle.l_r},
      {"vehicle", "C_f", &t.vehicle.C_f},
      {"vehicle", "C_r", &t.vehicle.C_r},
      {"vehicle", "steer_ratio", &t.vehicle.steer_ratio},

      {"column", "J_eq", &t.column.J_eq},
      {"column", "B_eq", &t.column.B_eq},
      {"column", "K_Fz", &t.column.K_Fz},
      {"column", "friction_coulomb", &t.column.friction_coulomb},
      {"column", "sat_gain", &t.column.sat_gain},
      {"column", "omega_eps", &t.column.omega_eps},
      {"column", "theta_stop", &t.column.theta_stop},

      {"controller", "K_y", &t.controller.gains.K_y},
      {"controller", "K_yd", &t.controller.gains.K_yd},
      {"controller", "K_theta", &t.controller.gains.K_theta},
      {"controller", "K_alpha", &t.controller.gains.K_alpha},
      {"controller", "tau_max", &t.controller.tau_max},
      {"controller", "weak_factor", &t.controller.weak_factor},
      {"controller", "use_reference_accel", &t.controller.use_reference_accel},
      {"controller", "disturbance_mismatch", &t.controller.disturbance_mismatch},
      {"controller", "heading_error_stiffness", &t.controller.heading_error_stiffness},

      {"preview", "T_preview", &t.preview.T_preview},
      {"preview", "lowpass", &t.preview.lowpass},
      {"preview", "cutoff_hz", &t.preview.cutoff_hz},
      {"preview", "heading_at_vehicle", &t.preview.heading_at_vehicle},

      {"consistency", "window_s", &t.consistency.window_s},
      {"consistency", "delta", &t.consistency.delta},
      {"consistency", "debounce", &t.consistency.debounce},
      {"consistency", "use_estimated_driver_torque",
       &t.consistency.use_estimated_driver_torque},

      {"authority", "lambda", &t.authority.lambda},
      {"authority", "gamma", &t.authority.gamma},
      {"authority", "K_replan", &t.authority.K_replant},
      {"authority", "shifting_eps", &t.authority.shifting_eps},
      {"authority", "default_direction", &t.authority.default_direction},
      {"authority", "head_threshold", &t.authority.head_threshold},

      {"driver", "gain_y", &t.driver.gain_y},
      {"driver", "gain_psi", &t.driver.gain_psi},
      {"driver", "preview_T", &t.driver.preview_T},
      {"driver", "reaction_delay", &t.driver.reaction_delay},
      {"driver", "noise_std", &t.driver.noise_std},
      {"driver", "noise_rate_hz", &t.driver.noise_rate_hz},
      {"driver", "arm_damping", &t.driver.arm_damping},
      {"driver", "stiffen_factor", &t.driver.stiffen_factor},
      {"driver", "resist_stiffness", &t.driver.resist_stiffness},
      {"driver", "glance_lead", &t.driver.glance_lead},
      {"driver", "head_peak", &t.driver.head_peak},
      {"driver", "head_ramp_s", &t.driver.head_ramp_s},
      {"driver", "lc_duration", &t.driver.lc_duration},

      {"scenario", "lane_width", &t.scenario.geometry.lane_width},
      {"scenario", "lane_count", &t.scenario.geometry.lane_count},
      {"scenario", "course_length", &t.scenario.geometry.course_length},
      {"scenario", "deficit_min_kmh", &t.scenario.deficit_min_kmh},
      {"scenario", "deficit_max_kmh", &t.scenario.deficit_max_kmh},
      {"scenario", "ego_speed_kmh", &t.scenario.ego_speed_kmh},
      {"scenario", "dip_fraction", &t.scenario.dip_fraction},
      {"scenario", "dip_gap", &t.scenario.dip_gap},
      {"scenario", "dip_ramp", &t.scenario.dip_ramp},
      {"scenario", "start_lane", &t.scenario.start_lane},
      {"scenario", "rate_hz", &t.scenario.rate_hz},
      {"scenario", "offroad_margin", &t.scenario.offroad_margin},
      {"scenario", "lc_area_buffer_s", &t.scenario.lc_area_buffer_s},

      {"predictor", "kind", &t.predictor.kind},
      {"predictor", "horizon_s", &t.predictor.horizon_s},
      {"predictor", "command", &t.predictor.command},
      {"predictor", "head_threshold", &t.predictor.heuristic.head_threshold},
      {"predictor", "head_window_s", &t.predictor.heuristic.head_window_s},
      {"predictor", "drift_window_s", &t.predictor.heuristic.drift_window_s},
      {"predictor", "window_s", &t.intent_window_s},

      {"metrics", "swrr_gap_deg", &c.metrics.swrr_gap_deg},
      {"metrics", "psi_on_deg", &c.metrics.psi_on_deg},
      {"metrics", "psi_off_deg", &c.metrics.psi_off_deg},
      {"metrics", "overshoot_window_s", &c.metrics.overshoot_window_s},
  };
}

std::string where(const std::string& section, const std::string& key) {
  return "[" + section + "] " + key;
}

template <typename T>
T parse_number(const std::string& text, const std::string& ctx) {
  T v{};
  const std::string s = boost::trim_copy(text);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError(ctx + ": cannot parse '" + text + "'");
  }
  return v;
}

bool parse_bool(const std::string& text, const std::string& ctx) {
  const std::string s = boost::to_lower_copy(boost::trim_copy(text));
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError(ctx + ": expected a boolean, got '" + text + "'");
}

std::string render(const Slot& slot) {
  struct {
    std::string operator()(double* p) const { return format_double(*p); }
    std::string operator()(int* p) const { return std::to_string(*p); }
    std::string operator()(bool* p) const { return *p ? "true" : "false"; }
    std::string operator()(std::string* p) const { return *p; }
  } v;
  return std::visit(v, slot);
}

void assign(const Slot& slot, const std::string& text, const std::string& ctx) {
  struct {
    const std::string& text;
    const std::string& ctx;
    void operator()(double* p) const { *p = parse_number<double>(text, ctx); }
    void operator()(int* p) const { *p = parse_number<int>(text, ctx); }
    void operator()(bool* p) const { *p = parse_bool(text, ctx); }
    void operator()(std::string* p) const { *p = boost::trim_copy(text); }
  } v{text, ctx};
  std::visit(v, slot);
}

std::string render_events(const std::vector<LcEventSpec>& events) {
  std::string out;
  for (const LcEventSpec& e : events) {
    if (!out.empty()) out += ", ";
    out += format_double(e.trigger_x) + ":" + std::to_string(e.target_lane) + ":" +
           (e.lead_vehicle ? "lead" : "free");
    if (!e.comply_with_assist) out += ":defy";
  }
  return out;
}

std::vector<LcEventSpec> parse_events(const std::string& text) {
  std::vector<LcEventSpec> out;
  std::vector<std::string> items;
  boost::split(items, text, boost::is_any_of(","));
  for (std::string item : items) {
    boost::trim(item);
    if (item.empty()) continue;
    std::vector<std::string> f;
    boost::split(f, item, boost::is_any_of(":"));
    if (f.size() < 2 || f.size() > 4) {
      throw ConfigError("[scenario] events: expected x:lane[:lead|free][:defy], got '" + item +
                        "'");
    }
    LcEventSpec e;
    e.trigger_x = parse_number<double>(f[0], "[scenario] events");
    e.target_lane = parse_number<int>(f[1], "[scenario] events");
    for (std::size_t k = 2; k < f.size(); ++k) {
      const std::string flag = boost::trim_copy(f[k]);
      if (flag == "lead") {
        e.lead_vehicle = true;
      } else if (flag == "free") {
        e.lead_vehicle = false;
      } else if (flag == "defy") {
        e.comply_with_assist = false;
      } else {
        throw ConfigError("[scenario] events: unknown flag '" + flag + "'");
      }
    }
    out.push_back(e);
  }
  return out;
}

bool glob_match(const std::string& pattern, const std::string& s) {
  const auto star = pattern.find('*');
  if (star == std::string::npos) return pattern == s;
  const std::string pre = pattern.substr(0, star);
  const std::string post = pattern.substr(star + 1);
  return s.size() >= pre.size() + post.size() && s.compare(0, pre.size(), pre) == 0 &&
         s.compare(s.size() - post.size(), post.size(), post) == 0;
}

}  // namespace

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::vector<std::string> items;
  boost::split(items, text, boost::is_any_of(","));
  for (std::string item : items) {
    boost::trim(item);
    if (item.empty()) continue;
    const auto dash = item.find('-');
    if (dash == std::string::npos) {
      out.push_back(parse_number<std::uint64_t>(item, "seeds"));
      continue;
    }
    const auto lo = parse_number<std::uint64_t>(item.substr(0, dash), "seeds");
    const auto hi = parse_number<std::uint64_t>(item.substr(dash + 1), "seeds");
    if (hi < lo) throw ConfigError("seeds: empty range '" + item + "'");
    for (std::uint64_t s = lo; s <= hi; ++s) out.push_back(s);
  }
  if (out.empty()) throw ConfigError("seeds: list is empty");
  return out;
}

std::vector<Condition> filter_conditions(const std::string& filter) {
  std::vector<std::string> pats;
  boost::split(pats, filter, boost::is_any_of(","));
  std::vector<Condition> out;
  for (const Condition& c : Condition::table()) {
    for (std::string p : pats) {
      boost::trim(p);
      if (p == "all" || glob_match(p, c.name())) {
        out.push_back(c);
        break;
      }
    }
  }
  if (out.empty()) throw ConfigError("no condition matches '" + filter + "'");
  return out;
}

std::vector<Condition> SimConfig::condition_list() const {
  if (conditions.empty()) return Condition::table();
  std::vector<Condition> out;
  for (const std::string& name : conditions) out.push_back(Condition::parse(name));
  return out;
}

void SimConfig::validate() const {
  trial.validate();
  metrics.validate();
  if (seeds.empty()) throw ConfigError("seed list is empty");
  condition_list();
}

SimConfig parse_config(std::istream& is) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::ini_parser::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  SimConfig cfg;
  std::map<std::pair<std::string, std::string>, Slot> table;
  for (const Binding& b : bindings(cfg)) table.emplace(std::make_pair(b.section, b.key), b.slot);

  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw ConfigError("config: key '" + section + "' outside any section");
    }
    for (const auto& [key, node] : body) {
      const std::string value = node.data();
      const std::string ctx = where(section, key);
      if (section == "scenario" && key == "events") {
        cfg.trial.scenario.events = parse_events(value);
      } else if (section == "experiment" && key == "conditions") {
        cfg.conditions.clear();
        for (const Condition& c : filter_conditions(value)) cfg.conditions.push_back(c.name());
      } else if (section == "experiment" && key == "seeds") {
        cfg.seeds = parse_seed_list(value);
      } else {
        const auto it = table.find({section, key});
        if (it == table.end()) throw ConfigError("config: unknown key " + ctx);
        assign(it->second, value, ctx);
      }
    }
  }
  cfg.validate();
  return cfg;
}

SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path.string());
  return parse_config(is);
}

void dump_config(std::ostream& os, const SimConfig& cfg_in) {
  SimConfig cfg = cfg_in;
  os << "# hapsteer configuration. Every key is optional; omitted keys keep these values.\n";
  std::string section;
  for (const Binding& b : bindings(cfg)) {
    if (section != b.section) {
      if (section == "scenario") {
        os << "events = " << render_events(cfg.trial.scenario.events) << '\n';
      }
      section = b.section;
      os << "\n[" << section << "]\n";
    }
    os << b.key << " = " << render(b.slot) << '\n';
  }
  os << "\n[experiment]\n";
  std::string names;
  for (const Condition& c : cfg.condition_list()) {
    if (!names.empty()) names += ",";
    names += c.name();
  }
  os << "conditions = " << names << '\n';
  std::string seeds;
  for (std::uint64_t s : cfg.seeds) {
    if (!seeds.empty()) seeds += ",";
    seeds += std::to_string(s);
  }
  os << "seeds = " << seeds << '\n';
}

std::string dump_config(const SimConfig& cfg) {
  std::ostringstream os;
  dump_config(os, cfg);
  return os.str();
}

}  // namespace hapsteer
