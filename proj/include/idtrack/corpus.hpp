#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "idtrack/bootstrap.hpp"
#include "idtrack/config_io.hpp"
#include "idtrack/evaluation.hpp"
#include "idtrack/scenesim.hpp"
#include "idtrack/trackers.hpp"

namespace idtrack {

namespace fs = std::filesystem;

// Corpus layout, one directory per corpus:
//   corpus.json                  resolved generation config and per-scene seeds
//   scene_0000.json              frame grid manifest
//   scene_0000.gt.csv            ground truth
//   scene_0000.obs.csv           observations (with source_id)
// Prediction directories hold scene_0000.pred.csv plus a copy of the manifest.

std::string scene_name(std::size_t index);
fs::path manifest_path(const fs::path& dir, const std::string& scene);
fs::path truth_path(const fs::path& dir, const std::string& scene);
fs::path observation_path(const fs::path& dir, const std::string& scene);
fs::path prediction_path(const fs::path& dir, const std::string& scene);

// Scene ids present in `dir`, sorted (one per manifest).
std::vector<std::string> list_scenes(const fs::path& dir);

struct SceneSeeds {
  std::uint64_t scenario = 0;
  std::uint64_t observation = 0;
  std::uint64_t tracker = 0;
};

SceneSeeds scene_seeds(std::uint64_t master, std::size_t index);

struct SimulateSpec {
  ScenarioConfig scenario;
  ObservationModel observation;
  std::size_t n_scenes = 1;
  std::uint64_t seed = 0;  // master seed; scene seeds derive from it
};

SimulateSpec simulate_spec_from_json(const nlohmann::json& j, std::optional<std::uint64_t> seed_override = {});

struct GeneratedScene {
  std::string id;
  TrackSet truth;
  ObservationSet observations;
};

GeneratedScene generate_corpus_scene(const SimulateSpec& spec, std::size_t index);
void simulate_corpus(const SimulateSpec& spec, const fs::path& out_dir, std::size_t jobs = 1);

struct SceneFailure {
  std::string scene_id;
  std::string message;
};

// Number of speakers recorded in corpus.json, if any.
std::optional<std::size_t> corpus_speaker_count(const fs::path& dir);

// Runs one tracker on one scene. White-box adversaries read `truth`; the oracle and
// pf trackers read `observations`.
TrackSet run_tracker(const TrackerSpec& spec, const TrackSet* truth, const ObservationSet* observations,
                     std::size_t n_speakers, std::uint64_t seed);

// Tracks every scene in `scenes_dir`, writing predictions to `out_dir`. Failing
// scenes are reported and skipped.
std::vector<SceneFailure> track_corpus(const fs::path& scenes_dir, const TrackerSpec& spec, const fs::path& out_dir,
                                       std::size_t jobs = 1);

struct BootstrapParams {
  double fraction = 0.8;
  std::size_t replicates = 100;
  std::uint64_t seed = 0;
};

struct SceneReport {
  std::string scene_id;
  MetricsReport report;
};

using AggregateTable = std::map<std::string, MetricAggregate>;

// Aggregates every metric of `metric_columns()` and `extra_metrics()`.
AggregateTable aggregate_reports(const std::vector<SceneReport>& scenes, const BootstrapParams& bootstrap);

struct EvaluateResult {
  std::vector<SceneReport> scenes;
  std::vector<SceneFailure> failures;
  AggregateTable aggregate;
};

EvaluateResult evaluate_corpus(const fs::path& gt_dir, const fs::path& pred_dir, const EvalParams& params,
                               const BootstrapParams& bootstrap, std::size_t jobs = 1);

// Real values as %.12g; undefined values as empty fields.
std::string format_metric(const std::optional<double>& v);

void write_metrics_csv(const std::vector<SceneReport>& scenes, std::ostream& out);
nlohmann::ordered_json aggregate_to_json(const AggregateTable& table);

struct SubsetSpec {
  std::size_t n_speakers = 1;
  std::size_t n_scenes = 150;
};

struct SweepSpec {
  std::vector<SubsetSpec> subsets;
  std::vector<KMaxSpec> k_max;
  ScenarioConfig scenario;
  ObservationModel observation;
  TrackerSpec tracker;
  EvalParams eval;
  BootstrapParams bootstrap;
  std::uint64_t seed = 0;
};

SweepSpec sweep_spec_from_json(const nlohmann::json& j, std::optional<std::uint64_t> seed_override = {},
                               std::optional<double> gate_override_rad = {});

struct SweepCell {
  std::size_t n_speakers = 1;
  KMaxSpec k_max;
  std::vector<SceneReport> scenes;
  AggregateTable aggregate;
};

struct SweepResult {
  std::vector<SweepCell> cells;  // ordered by subset, then by k_max as listed
};

SweepResult run_sweep(const SweepSpec& spec, std::size_t jobs = 1);

std::string subset_label(std::size_t n_speakers);

// sweep_long.csv, sweep_summary.csv, sweep_scenes.csv and aggregate.json.
void write_sweep_outputs(const SweepResult& result, const SweepSpec& spec, const fs::path& out_dir);

enum class Trend { kNonIncreasing, kNonDecreasing };

struct TrendCheck {
  std::string subset;
  std::string metric;
  bool passed = false;
  std::string detail;
};

// Along the k_max axis of each subset: the endpoints must be strictly ordered in
// the expected direction and no adjacent pair may invert by more than the larger of
// the two bootstrap stds. Defaults: ass_re non-increasing, ass_pr and tsr
// non-decreasing.
std::vector<TrendCheck> check_trends(const SweepResult& result,
                                     const std::vector<std::pair<std::string, Trend>>& rules = {
                                         {"ass_re", Trend::kNonIncreasing},
                                         {"ass_pr", Trend::kNonDecreasing},
                                         {"tsr", Trend::kNonDecreasing}});

struct LintIssue {
  std::string scene_id;
  std::string message;
};

// Schema checks on every scene, plus (for jump and static corpora) that every
// maximal active run of a ground-truth track holds one direction.
std::vector<LintIssue> lint_corpus(const fs::path& dir);

}  // namespace idtrack
