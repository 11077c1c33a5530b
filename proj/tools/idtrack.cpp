// Command-line front end: simulate, track, evaluate, sweep, lint.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "idtrack/config_io.hpp"
#include "idtrack/corpus.hpp"
#include "idtrack/errors.hpp"

namespace {

namespace fs = std::filesystem;
using namespace idtrack;

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kTrend = 3 };

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<double> gate_deg;
  std::string out;
  std::size_t jobs = 1;
  bool assert_trends = false;
  std::string scenes_dir;
  std::string gt_dir;
  std::string pred_dir;
  std::string tracker = "";
  double ospa_cutoff_deg = 30.0;
  double ospa_order = 1.0;
  std::size_t replicates = 100;
  double fraction = 0.8;
};

void report_failures(const std::vector<SceneFailure>& failures) {
  for (const auto& f : failures) std::cerr << "error: " << f.scene_id << ": " << f.message << '\n';
}

int cmd_simulate(const Options& o) {
  const auto spec = simulate_spec_from_json(load_json_file(o.config), o.seed);
  simulate_corpus(spec, o.out, o.jobs);
  std::cout << "wrote " << spec.n_scenes << " scenes to " << o.out << '\n';
  return kOk;
}

int cmd_track(const Options& o) {
  TrackerSpec spec;
  if (!o.config.empty()) spec = tracker_from_json(load_json_file(o.config));
  if (!o.tracker.empty()) {
    nlohmann::json j = o.config.empty() ? nlohmann::json::object() : load_json_file(o.config);
    j["tracker"] = o.tracker;
    spec = tracker_from_json(j);
  }
  if (o.seed) spec.pf.seed = *o.seed;
  const auto failures = track_corpus(o.scenes_dir, spec, o.out, o.jobs);
  report_failures(failures);
  const auto n = list_scenes(o.scenes_dir).size();
  std::cout << "tracked " << (n - failures.size()) << "/" << n << " scenes into " << o.out << '\n';
  return failures.empty() ? kOk : kData;
}

int cmd_evaluate(const Options& o) {
  EvalParams params;
  if (o.gate_deg) params.gate = deg2rad(*o.gate_deg);
  params.ospa = {deg2rad(o.ospa_cutoff_deg), o.ospa_order};
  if (!(params.gate > 0.0 && params.gate <= kPi)) throw InvalidConfig("--gate-deg must be in (0, 180]");
  BootstrapParams boot{o.fraction, o.replicates, o.seed.value_or(0)};
  const auto result = evaluate_corpus(o.gt_dir, o.pred_dir, params, boot, o.jobs);
  report_failures(result.failures);

  fs::create_directories(o.out);
  {
    std::ofstream f(fs::path(o.out) / "metrics.csv", std::ios::binary | std::ios::trunc);
    write_metrics_csv(result.scenes, f);
  }
  {
    nlohmann::ordered_json j;
    j["n_scenes"] = result.scenes.size();
    j["n_failed"] = result.failures.size();
    j["gate_deg"] = rad2deg(params.gate);
    j["ospa_cutoff_deg"] = o.ospa_cutoff_deg;
    j["ospa_order"] = o.ospa_order;
    j["bootstrap"] = {{"fraction", boot.fraction}, {"replicates", boot.replicates}, {"seed", boot.seed}};
    j["metrics"] = aggregate_to_json(result.aggregate);
    std::ofstream f(fs::path(o.out) / "aggregate.json", std::ios::binary | std::ios::trunc);
    f << j.dump(2) << '\n';
  }
  std::cout << "evaluated " << result.scenes.size() << " scenes into " << o.out << '\n';
  return result.failures.empty() ? kOk : kData;
}

int cmd_sweep(const Options& o) {
  std::optional<double> gate;
  if (o.gate_deg) gate = deg2rad(*o.gate_deg);
  const auto spec = sweep_spec_from_json(load_json_file(o.config), o.seed, gate);
  const auto result = run_sweep(spec, o.jobs);
  write_sweep_outputs(result, spec, o.out);
  std::cout << "wrote " << result.cells.size() << " sweep cells to " << o.out << '\n';
  if (!o.assert_trends) return kOk;
  bool ok = true;
  for (const auto& c : check_trends(result)) {
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.subset << ' ' << c.metric << ": " << c.detail << '\n';
    ok = ok && c.passed;
  }
  return ok ? kOk : kTrend;
}

int cmd_lint(const Options& o) {
  const auto issues = lint_corpus(o.scenes_dir);
  for (const auto& i : issues) std::cerr << "lint: " << i.scene_id << ": " << i.message << '\n';
  std::cout << (issues.empty() ? "ok" : std::to_string(issues.size()) + " issue(s)") << '\n';
  return issues.empty() ? kOk : kData;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Identity-assignment evaluation for sound source tracking"};
  app.require_subcommand(1);
  Options o;

  auto add_jobs = [&](CLI::App* sub) {
    sub->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
  };

  auto* simulate = app.add_subcommand("simulate", "Generate a seeded scene corpus");
  simulate->add_option("--config", o.config, "Scenario JSON")->required();
  simulate->add_option("--seed", o.seed, "Master seed (overrides the config)");
  simulate->add_option("--out", o.out, "Output directory")->required();
  add_jobs(simulate);

  auto* track = app.add_subcommand("track", "Run a tracker over a corpus");
  track->add_option("scenes", o.scenes_dir, "Corpus directory")->required();
  track->add_option("--config", o.config, "Tracker JSON");
  track->add_option("--tracker", o.tracker, "Tracker kind (pf, oracle, splitter, merger, swapper)");
  track->add_option("--seed", o.seed, "Tracker seed for corpora without corpus.json");
  track->add_option("--out", o.out, "Prediction directory")->required();
  add_jobs(track);

  auto* evaluate = app.add_subcommand("evaluate", "Score predictions against ground truth");
  evaluate->add_option("gt", o.gt_dir, "Ground-truth corpus directory")->required();
  evaluate->add_option("pred", o.pred_dir, "Prediction directory")->required();
  evaluate->add_option("--gate-deg", o.gate_deg, "Matching gate in degrees (default 20)");
  evaluate->add_option("--ospa-cutoff-deg", o.ospa_cutoff_deg, "OSPA cutoff in degrees");
  evaluate->add_option("--ospa-order", o.ospa_order, "OSPA order p");
  evaluate->add_option("--replicates", o.replicates, "Bootstrap replicates (0 for plain means)");
  evaluate->add_option("--fraction", o.fraction, "Bootstrap subsample fraction");
  evaluate->add_option("--seed", o.seed, "Bootstrap seed");
  evaluate->add_option("--out", o.out, "Report directory")->required();
  add_jobs(evaluate);

  auto* sweep = app.add_subcommand("sweep", "Simulate, track and evaluate over a K_max grid");
  sweep->add_option("--config", o.config, "Sweep JSON")->required();
  sweep->add_option("--seed", o.seed, "Master seed (overrides the config)");
  sweep->add_option("--gate-deg", o.gate_deg, "Matching gate in degrees");
  sweep->add_option("--out", o.out, "Output directory")->required();
  sweep->add_flag("--assert-trends", o.assert_trends, "Exit 3 unless AssRe falls and AssPr, TSR rise with K_max");
  add_jobs(sweep);

  auto* lint = app.add_subcommand("lint", "Validate a scene corpus");
  lint->add_option("scenes", o.scenes_dir, "Corpus directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(o);
    if (track->parsed()) return cmd_track(o);
    if (evaluate->parsed()) return cmd_evaluate(o);
    if (sweep->parsed()) return cmd_sweep(o);
    if (lint->parsed()) return cmd_lint(o);
  } catch (const InvalidConfig& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  }
  return kUsage;
}
