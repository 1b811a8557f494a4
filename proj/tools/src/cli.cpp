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

#include "hapsteer_cli/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "hapsteer/config.hpp"
#include "hapsteer/errors.hpp"
#include "hapsteer/metrics.hpp"
#include "hapsteer/scenario.hpp"
#include "hapsteer/verify.hpp"

namespace hapsteer::cli {

namespace fs = std::filesystem;

namespace {

struct Flags {
  std::string config;
  std::string out = "out";
  std::uint64_t seed = 1;
  std::string seeds;
  std::string condition;
  unsigned jobs = 1;
  std::string group = "condition";
  std::vector<std::string> inputs;
  bool dump = false;
};

SimConfig load(const Flags& f) {
  if (f.config.empty()) {
    SimConfig cfg;
    cfg.validate();
    return cfg;
  }
  return load_config(f.config);
}

std::vector<StationRange> lc_areas_for(const SimConfig& cfg) {
  return build_course(cfg.trial.scenario, cfg.trial.driver.lc_duration, 0).lc_areas();
}

void append_report(const fs::path& path, const TrialReport& rep) {
  const bool fresh = !fs::exists(path);
  std::ofstream os(path, std::ios::app);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  if (fresh) os << trial_report_header() << '\n';
  os << trial_report_row(rep) << '\n';
}

void write_reports(const fs::path& path, const std::vector<TrialReport>& reports) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << trial_report_header() << '\n';
  for (const TrialReport& r : reports) os << trial_report_row(r) << '\n';
}

void write_summary(const fs::path& path, const std::vector<SummaryRow>& rows) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  write_summary_csv(os, rows);
}

Grouping parse_grouping(const std::string& g) {
  if (g == "condition") return Grouping::Condition;
  if (g == "strength") return Grouping::Strength;
  if (g == "duration") return Grouping::Duration;
  throw ConfigError("--group must be condition, strength or duration");
}

int cmd_run(const Flags& f, std::ostream& out, std::ostream& err) {
  const SimConfig cfg = load(f);
  const Condition cond = Condition::parse(f.condition.empty() ? "strong-normal" : f.condition);
  fs::create_directories(f.out);
  DriveLog log;
  try {
    log = run_trial(cond, cfg.trial, f.seed);
  } catch (const TrialAborted& e) {
    err << "trial aborted: " << e.what() << '\n';
    return kAborted;
  }
  const fs::path path = fs::path(f.out) / log_file_name(log.condition, log.seed);
  save_csv(path, log);
  const TrialReport rep =
      evaluate_trial(log, cfg.trial.scenario.geometry, lc_areas_for(cfg), cfg.metrics);
  append_report(fs::path(f.out) / "metrics.csv", rep);
  out << path.string() << ": " << log.size() << " records, " << rep.lane_changes.size()
      << " lane changes, sdlp " << std::setprecision(4) << rep.sdlp << " m\n";
  return kOk;
}

int cmd_matrix(const Flags& f, std::ostream& out, std::ostream& err) {
  SimConfig cfg = load(f);
  std::vector<Condition> conds =
      f.condition.empty() ? cfg.condition_list() : filter_conditions(f.condition);
  const std::vector<std::uint64_t> seeds = f.seeds.empty() ? cfg.seeds : parse_seed_list(f.seeds);
  fs::create_directories(f.out);
  const auto areas = lc_areas_for(cfg);

  std::vector<TrialReport> reports;
  const auto outcomes = run_matrix(
      conds, cfg.trial, seeds, f.jobs, [&](const TrialOutcome& o, DriveLog&& log) {
        if (!o.ok) return;
        save_csv(fs::path(f.out) / log_file_name(log.condition, log.seed), log);
        reports.push_back(
            evaluate_trial(log, cfg.trial.scenario.geometry, areas, cfg.metrics));
      });

  int failed = 0;
  for (const TrialOutcome& o : outcomes) {
    if (o.ok) continue;
    ++failed;
    err << "FAILED " << o.condition.name() << " seed " << o.seed << ": " << o.error << '\n';
  }
  // Completion order depends on --jobs; the written tables must not.
  std::vector<std::string> order;
  for (const Condition& c : conds) order.push_back(c.name());
  std::sort(reports.begin(), reports.end(), [&](const TrialReport& a, const TrialReport& b) {
    const auto ia = std::find(order.begin(), order.end(), a.condition) - order.begin();
    const auto ib = std::find(order.begin(), order.end(), b.condition) - order.begin();
    return ia != ib ? ia < ib : a.seed < b.seed;
  });

  if (!reports.empty()) {
    write_reports(fs::path(f.out) / "reports.csv", reports);
    const auto rows = summarize(reports, Grouping::Condition);
    write_summary(fs::path(f.out) / "summary.csv", rows);
    out << format_summary_table(rows);
  }
  out << outcomes.size() - failed << "/" << outcomes.size() << " trials written to " << f.out
      << '\n';
  return failed ? kFailure : kOk;
}

int cmd_metrics(const Flags& f, std::ostream& out, std::ostream&) {
  const SimConfig cfg = load(f);
  std::vector<fs::path> files;
  for (const std::string& in : f.inputs) {
    if (fs::is_directory(in)) {
      for (const auto& e : fs::directory_iterator(in)) {
        const auto name = e.path().filename().string();
        if (e.path().extension() == ".csv" && name != "summary.csv" && name != "reports.csv" &&
            name != "metrics.csv") {
          files.push_back(e.path());
        }
      }
    } else {
      files.emplace_back(in);
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw ConfigError("metrics: no drive logs given");

  const auto areas = lc_areas_for(cfg);
  std::vector<TrialReport> reports;
  for (const fs::path& p : files) {
    reports.push_back(
        evaluate_trial(load_csv(p), cfg.trial.scenario.geometry, areas, cfg.metrics));
  }
  const auto rows = summarize(reports, parse_grouping(f.group));
  fs::create_directories(f.out);
  write_reports(fs::path(f.out) / "reports.csv", reports);
  write_summary(fs::path(f.out) / "summary.csv", rows);
  out << format_summary_table(rows);
  return kOk;
}

int cmd_verify(const Flags& f, std::ostream& out, std::ostream&) {
  const SimConfig cfg = load(f);
  VerifyOptions opt;
  opt.seed = f.seed;
  const auto results = run_verification(cfg.trial, opt);
  bool all = true;
  for (const CheckResult& r : results) {
    all = all && r.passed;
    out << (r.passed ? "PASS  " : "FAIL  ") << std::left << std::setw(24) << r.name << r.detail
        << '\n';
  }
  out << (all ? "all checks passed" : "some checks FAILED") << '\n';
  return all ? kOk : kFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"hapsteer: intention-aware haptic steering simulator"};
  app.require_subcommand(0, 1);
  Flags f;
  app.add_option("--config", f.config, "INI configuration file");
  app.add_flag("--dump-config", f.dump, "print the effective configuration and exit");

  auto* run_cmd = app.add_subcommand("run", "run one trial");
  run_cmd->add_option("--condition", f.condition, "condition name, e.g. strong-normal");
  run_cmd->add_option("--seed", f.seed, "trial seed");
  run_cmd->add_option("--out", f.out, "output directory");

  auto* matrix_cmd = app.add_subcommand("matrix", "run conditions x seeds");
  matrix_cmd->add_option("--condition", f.condition, "filter, e.g. strong-* or manual,weak-*");
  matrix_cmd->add_option("--seeds", f.seeds, "seed list, e.g. 1-12");
  matrix_cmd->add_option("--jobs", f.jobs, "worker threads")->check(CLI::PositiveNumber);
  matrix_cmd->add_option("--out", f.out, "output directory");

  auto* metrics_cmd = app.add_subcommand("metrics", "evaluate existing drive logs");
  metrics_cmd->add_option("inputs", f.inputs, "CSV files or directories")->required();
  metrics_cmd->add_option("--group", f.group, "condition | strength | duration");
  metrics_cmd->add_option("--out", f.out, "output directory");

  auto* verify_cmd = app.add_subcommand("verify", "run the canned verification checks");
  verify_cmd->add_option("--seed", f.seed, "trial seed");

  // The subcommands also accept the global flags after their name.
  for (CLI::App* sub : {run_cmd, matrix_cmd, metrics_cmd, verify_cmd}) {
    sub->fallthrough();
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kConfigError;
  }

  try {
    if (f.dump) {
      dump_config(out, load(f));
      return kOk;
    }
    if (*run_cmd) return cmd_run(f, out, err);
    if (*matrix_cmd) return cmd_matrix(f, out, err);
    if (*metrics_cmd) return cmd_metrics(f, out, err);
    if (*verify_cmd) return cmd_verify(f, out, err);
    out << app.help();
    return kConfigError;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace hapsteer::cli
