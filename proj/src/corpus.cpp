#include "idtrack/corpus.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include "idtrack/errors.hpp"
#include "idtrack/parallel.hpp"

namespace idtrack {

using nlohmann::json;
using nlohmann::ordered_json;

std::string scene_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "scene_%04zu", index);
  return buf;
}

fs::path manifest_path(const fs::path& dir, const std::string& scene) { return dir / (scene + ".json"); }
fs::path truth_path(const fs::path& dir, const std::string& scene) { return dir / (scene + ".gt.csv"); }
fs::path observation_path(const fs::path& dir, const std::string& scene) { return dir / (scene + ".obs.csv"); }
fs::path prediction_path(const fs::path& dir, const std::string& scene) { return dir / (scene + ".pred.csv"); }

std::vector<std::string> list_scenes(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error("'" + dir.string() + "' is not a directory");
  std::vector<std::string> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto p = entry.path();
    if (p.extension() != ".json" || p.filename() == "corpus.json" || p.filename() == "aggregate.json") continue;
    out.push_back(p.stem().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

SceneSeeds scene_seeds(std::uint64_t master, std::size_t index) {
  const auto base = derive_seed(master, index);
  return {derive_seed(base, 0), derive_seed(base, 1), derive_seed(base, 2)};
}

SimulateSpec simulate_spec_from_json(const json& j, std::optional<std::uint64_t> seed_override) {
  SimulateSpec spec;
  spec.scenario = scenario_from_json(j);
  if (j.contains("observation")) spec.observation = observation_from_json(j.at("observation"));
  if (j.contains("n_scenes")) {
    const auto& v = j.at("n_scenes");
    if (!v.is_number_integer() || v.get<long long>() < 1) throw InvalidConfig("n_scenes must be >= 1");
    spec.n_scenes = v.get<std::size_t>();
  }
  spec.seed = seed_override.value_or(spec.scenario.seed);
  spec.scenario.seed = spec.seed;
  return spec;
}

GeneratedScene generate_corpus_scene(const SimulateSpec& spec, std::size_t index) {
  const auto seeds = scene_seeds(spec.seed, index);
  ScenarioConfig sc = spec.scenario;
  sc.seed = seeds.scenario;
  ObservationModel om = spec.observation;
  om.seed = seeds.observation;
  TrackSet truth = generate_scene(sc);
  ObservationSet obs = simulate_observations(truth, om);
  return {scene_name(index), std::move(truth), std::move(obs)};
}

void simulate_corpus(const SimulateSpec& spec, const fs::path& out_dir, std::size_t jobs) {
  fs::create_directories(out_dir);
  parallel_for(spec.n_scenes, jobs, [&](std::size_t i) {
    const auto scene = generate_corpus_scene(spec, i);
    write_manifest(scene.truth.grid(), manifest_path(out_dir, scene.id));
    write_trackset(scene.truth, truth_path(out_dir, scene.id));
    write_observations(scene.observations, observation_path(out_dir, scene.id));
  });

  ordered_json corpus;
  corpus["n_scenes"] = spec.n_scenes;
  corpus["seed"] = spec.seed;
  corpus["n_speakers"] = spec.scenario.n_speakers;
  corpus["mode"] = std::string(to_string(spec.scenario.mode));
  corpus["scenario"] = scenario_to_json(spec.scenario);
  corpus["observation"] = observation_to_json(spec.observation);
  ordered_json scenes = ordered_json::array();
  for (std::size_t i = 0; i < spec.n_scenes; ++i) {
    const auto s = scene_seeds(spec.seed, i);
    scenes.push_back({{"scene_id", scene_name(i)}, {"scenario_seed", s.scenario}, {"observation_seed", s.observation},
                      {"tracker_seed", s.tracker}});
  }
  corpus["scenes"] = scenes;
  std::ofstream f(out_dir / "corpus.json", std::ios::binary | std::ios::trunc);
  f << corpus.dump(2) << '\n';
}

namespace {

std::optional<json> read_corpus_json(const fs::path& dir) {
  const auto p = dir / "corpus.json";
  if (!fs::exists(p)) return std::nullopt;
  std::ifstream f(p);
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    throw ParseError(1, p.string() + ": " + e.what());
  }
}

std::uint64_t corpus_tracker_seed(const std::optional<json>& corpus, const std::string& scene, std::size_t index,
                                  std::uint64_t fallback_master) {
  if (corpus && corpus->contains("scenes"))
    for (const auto& s : corpus->at("scenes"))
      if (s.value("scene_id", "") == scene && s.contains("tracker_seed"))
        return s.at("tracker_seed").get<std::uint64_t>();
  return scene_seeds(fallback_master, index).tracker;
}

}  // namespace

std::optional<std::size_t> corpus_speaker_count(const fs::path& dir) {
  const auto corpus = read_corpus_json(dir);
  if (corpus && corpus->contains("n_speakers")) return corpus->at("n_speakers").get<std::size_t>();
  return std::nullopt;
}

TrackSet run_tracker(const TrackerSpec& spec, const TrackSet* truth, const ObservationSet* observations,
                     std::size_t n_speakers, std::uint64_t seed) {
  auto need_truth = [&]() -> const TrackSet& {
    if (!truth) throw Error("tracker needs ground truth");
    return *truth;
  };
  auto need_obs = [&]() -> const ObservationSet& {
    if (!observations) throw Error("tracker needs observations");
    return *observations;
  };
  switch (spec.kind) {
    case TrackerKind::kPf: return pf_tracker(need_obs(), spec.resolve(n_speakers, seed));
    case TrackerKind::kOracle: return oracle_tracker(need_obs());
    case TrackerKind::kSplitter: return splitter_tracker(need_truth(), spec.split_k);
    case TrackerKind::kMerger: return merger_tracker(need_truth());
    case TrackerKind::kSwapper: return swapper_tracker(need_truth(), spec.swap_period_s);
  }
  throw InvalidConfig("unknown tracker kind");
}

std::vector<SceneFailure> track_corpus(const fs::path& scenes_dir, const TrackerSpec& spec, const fs::path& out_dir,
                                       std::size_t jobs) {
  const auto scenes = list_scenes(scenes_dir);
  const auto corpus = read_corpus_json(scenes_dir);
  const auto n_speakers_meta = corpus_speaker_count(scenes_dir);
  const bool white_box =
      spec.kind == TrackerKind::kSplitter || spec.kind == TrackerKind::kMerger || spec.kind == TrackerKind::kSwapper;
  // Validate the config once up front so config errors are not reported per scene.
  if (spec.kind == TrackerKind::kPf) spec.resolve(n_speakers_meta.value_or(spec.max_active.value_or(1)), 0);

  fs::create_directories(out_dir);
  std::vector<std::optional<SceneFailure>> failures(scenes.size());
  parallel_for(scenes.size(), jobs, [&](std::size_t i) {
    const auto& id = scenes[i];
    try {
      const FrameGrid grid = read_manifest(manifest_path(scenes_dir, id));
      std::optional<TrackSet> truth;
      std::optional<ObservationSet> obs;
      if (white_box || !n_speakers_meta) {
        const auto tp = truth_path(scenes_dir, id);
        if (!fs::exists(tp)) throw Error("missing ground-truth file " + tp.string());
        truth = read_trackset(tp, grid);
      }
      if (!white_box) {
        const auto op = observation_path(scenes_dir, id);
        if (!fs::exists(op)) throw Error("missing observation file " + op.string());
        obs = read_observations(op, grid);
      }
      const std::size_t n_speakers = n_speakers_meta ? *n_speakers_meta : truth->n_tracks();
      const auto seed = corpus_tracker_seed(corpus, id, i, spec.pf.seed);
      const TrackSet pred =
          run_tracker(spec, truth ? &*truth : nullptr, obs ? &*obs : nullptr,
                      std::max<std::size_t>(n_speakers, 1), seed);
      write_manifest(grid, manifest_path(out_dir, id));
      write_trackset(pred, prediction_path(out_dir, id));
    } catch (const std::exception& e) {
      failures[i] = SceneFailure{id, e.what()};
    }
  });
  std::vector<SceneFailure> out;
  for (auto& f : failures)
    if (f) out.push_back(std::move(*f));
  return out;
}

AggregateTable aggregate_reports(const std::vector<SceneReport>& scenes, const BootstrapParams& bootstrap) {
  AggregateTable table;
  std::vector<std::string> names = metric_columns();
  names.insert(names.end(), extra_metrics().begin(), extra_metrics().end());
  for (std::size_t m = 0; m < names.size(); ++m) {
    std::vector<std::optional<double>> values;
    values.reserve(scenes.size());
    for (const auto& s : scenes) values.push_back(metric_value(s.report, names[m]));
    Rng rng(derive_seed(bootstrap.seed, m));
    table[names[m]] = aggregate_metric(values, bootstrap.fraction, bootstrap.replicates, rng);
  }
  return table;
}

EvaluateResult evaluate_corpus(const fs::path& gt_dir, const fs::path& pred_dir, const EvalParams& params,
                               const BootstrapParams& bootstrap, std::size_t jobs) {
  const auto scenes = list_scenes(gt_dir);
  std::vector<std::optional<SceneReport>> reports(scenes.size());
  std::vector<std::optional<SceneFailure>> failures(scenes.size());
  parallel_for(scenes.size(), jobs, [&](std::size_t i) {
    const auto& id = scenes[i];
    try {
      const FrameGrid grid = read_manifest(manifest_path(gt_dir, id));
      const auto pm = manifest_path(pred_dir, id);
      FrameGrid pred_grid = grid;
      if (fs::exists(pm)) pred_grid = read_manifest(pm);
      if (!pred_grid.compatible_with(grid)) throw GridMismatch("prediction manifest grid differs from ground truth");
      const auto pp = prediction_path(pred_dir, id);
      if (!fs::exists(pp)) throw Error("missing prediction file " + pp.string());
      const TrackSet gt = read_trackset(truth_path(gt_dir, id), grid);
      const TrackSet pred = read_trackset(pp, pred_grid);
      reports[i] = SceneReport{id, evaluate_scene(pred, gt, params)};
    } catch (const std::exception& e) {
      failures[i] = SceneFailure{id, e.what()};
    }
  });
  EvaluateResult result;
  for (auto& r : reports)
    if (r) result.scenes.push_back(std::move(*r));
  for (auto& f : failures)
    if (f) result.failures.push_back(std::move(*f));
  result.aggregate = aggregate_reports(result.scenes, bootstrap);
  return result;
}

std::string format_metric(const std::optional<double>& v) {
  if (!v) return "";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", *v == 0.0 ? 0.0 : *v);
  return buf;
}

void write_metrics_csv(const std::vector<SceneReport>& scenes, std::ostream& out) {
  out << "scene_id";
  for (const auto& c : metric_columns()) out << ',' << c;
  out << '\n';
  for (const auto& s : scenes) {
    out << s.scene_id;
    for (const auto& c : metric_columns()) out << ',' << format_metric(metric_value(s.report, c));
    out << '\n';
  }
}

ordered_json aggregate_to_json(const AggregateTable& table) {
  ordered_json j = ordered_json::object();
  for (const auto& [name, agg] : table) {
    ordered_json m;
    m["mean"] = agg.mean ? ordered_json(*agg.mean) : ordered_json(nullptr);
    m["std"] = agg.std ? ordered_json(*agg.std) : ordered_json(nullptr);
    m["n_defined"] = agg.n_defined;
    m["n_excluded"] = agg.n_excluded;
    j[name] = m;
  }
  return j;
}

// ---------------------------------------------------------------------------
// Sweep

SweepSpec sweep_spec_from_json(const json& j, std::optional<std::uint64_t> seed_override,
                               std::optional<double> gate_override_rad) {
  if (!j.is_object()) throw InvalidConfig("sweep config must be a JSON object");
  static const std::set<std::string> allowed = {"subsets", "k_max", "scenario",        "observation", "tracker",
                                                "gate_deg", "ospa_cutoff_deg", "ospa_order", "bootstrap",   "seed"};
  for (const auto& [k, _] : j.items())
    if (!allowed.contains(k)) throw InvalidConfig("sweep config: unknown key '" + k + "'");

  SweepSpec spec;
  if (!j.contains("subsets") || !j.at("subsets").is_array() || j.at("subsets").empty())
    throw InvalidConfig("sweep config needs a non-empty 'subsets' array");
  for (const auto& s : j.at("subsets")) {
    if (!s.is_object()) throw InvalidConfig("subset entries must be objects");
    SubsetSpec sub;
    if (s.contains("n_speakers")) sub.n_speakers = s.at("n_speakers").get<std::size_t>();
    if (s.contains("n_scenes")) sub.n_scenes = s.at("n_scenes").get<std::size_t>();
    if (sub.n_speakers < 1 || sub.n_scenes < 1) throw InvalidConfig("subsets need n_speakers >= 1 and n_scenes >= 1");
    spec.subsets.push_back(sub);
  }
  if (j.contains("k_max")) {
    if (!j.at("k_max").is_array() || j.at("k_max").empty()) throw InvalidConfig("'k_max' must be a non-empty array");
    for (const auto& k : j.at("k_max")) spec.k_max.push_back(kmax_from_json(k));
  } else {
    spec.k_max.push_back(KMaxSpec{});
  }
  if (j.contains("scenario")) spec.scenario = scenario_from_json(j.at("scenario"));
  if (j.contains("observation")) spec.observation = observation_from_json(j.at("observation"));
  if (j.contains("tracker")) spec.tracker = tracker_from_json(j.at("tracker"));
  if (j.contains("gate_deg")) spec.eval.gate = deg2rad(j.at("gate_deg").get<double>());
  if (j.contains("ospa_cutoff_deg")) spec.eval.ospa.cutoff = deg2rad(j.at("ospa_cutoff_deg").get<double>());
  if (j.contains("ospa_order")) spec.eval.ospa.order = j.at("ospa_order").get<double>();
  if (j.contains("bootstrap")) {
    const auto& b = j.at("bootstrap");
    if (b.contains("fraction")) spec.bootstrap.fraction = b.at("fraction").get<double>();
    if (b.contains("replicates")) spec.bootstrap.replicates = b.at("replicates").get<std::size_t>();
  }
  if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
  if (seed_override) spec.seed = *seed_override;
  if (gate_override_rad) spec.eval.gate = *gate_override_rad;
  spec.bootstrap.seed = derive_seed(spec.seed, 0xb007);
  if (!(spec.eval.gate > 0.0 && spec.eval.gate <= kPi)) throw InvalidConfig("gate must be in (0, 180] deg");
  // Resolve every tracker config once so bad combinations fail before any work.
  for (const auto& sub : spec.subsets)
    for (const auto& k : spec.k_max) {
      TrackerSpec t = spec.tracker;
      t.k_max = k;
      t.resolve(sub.n_speakers, 0);
    }
  return spec;
}

std::string subset_label(std::size_t n_speakers) { return std::to_string(n_speakers) + "spk"; }

SweepResult run_sweep(const SweepSpec& spec, std::size_t jobs) {
  SweepResult result;
  for (const auto& sub : spec.subsets) {
    SimulateSpec sim;
    sim.scenario = spec.scenario;
    sim.scenario.n_speakers = sub.n_speakers;
    sim.observation = spec.observation;
    sim.n_scenes = sub.n_scenes;
    sim.seed = derive_seed(spec.seed, sub.n_speakers);

    std::vector<std::optional<GeneratedScene>> scenes(sub.n_scenes);
    parallel_for(sub.n_scenes, jobs, [&](std::size_t i) { scenes[i] = generate_corpus_scene(sim, i); });

    for (const auto& k : spec.k_max) {
      TrackerSpec tracker = spec.tracker;
      tracker.k_max = k;
      SweepCell cell{sub.n_speakers, k, std::vector<SceneReport>(sub.n_scenes), {}};
      parallel_for(sub.n_scenes, jobs, [&](std::size_t i) {
        const auto& s = *scenes[i];
        const auto seed = scene_seeds(sim.seed, i).tracker;
        const TrackSet pred = run_tracker(tracker, &s.truth, &s.observations, sub.n_speakers, seed);
        cell.scenes[i] = SceneReport{s.id, evaluate_scene(pred, s.truth, spec.eval)};
      });
      BootstrapParams b = spec.bootstrap;
      b.seed = derive_seed(spec.bootstrap.seed, sub.n_speakers);
      cell.aggregate = aggregate_reports(cell.scenes, b);
      result.cells.push_back(std::move(cell));
    }
  }
  return result;
}

void write_sweep_outputs(const SweepResult& result, const SweepSpec& spec, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  std::vector<std::string> names = metric_columns();
  names.insert(names.end(), extra_metrics().begin(), extra_metrics().end());

  {
    std::ofstream f(out_dir / "sweep_long.csv", std::ios::binary | std::ios::trunc);
    f << "subset,k_max,metric,mean,std,n_defined,n_excluded\n";
    for (const auto& cell : result.cells)
      for (const auto& name : names) {
        const auto& a = cell.aggregate.at(name);
        f << subset_label(cell.n_speakers) << ',' << cell.k_max.label() << ',' << name << ',' << format_metric(a.mean)
          << ',' << format_metric(a.std) << ',' << a.n_defined << ',' << a.n_excluded << '\n';
      }
  }
  {
    std::ofstream f(out_dir / "sweep_summary.csv", std::ios::binary | std::ios::trunc);
    f << "subset,k_max";
    for (const auto& name : names) f << ',' << name << "_mean," << name << "_std";
    f << '\n';
    for (const auto& cell : result.cells) {
      f << subset_label(cell.n_speakers) << ',' << cell.k_max.label();
      for (const auto& name : names) {
        const auto& a = cell.aggregate.at(name);
        f << ',' << format_metric(a.mean) << ',' << format_metric(a.std);
      }
      f << '\n';
    }
  }
  {
    std::ofstream f(out_dir / "sweep_scenes.csv", std::ios::binary | std::ios::trunc);
    f << "subset,k_max,scene_id";
    for (const auto& c : metric_columns()) f << ',' << c;
    f << '\n';
    for (const auto& cell : result.cells)
      for (const auto& s : cell.scenes) {
        f << subset_label(cell.n_speakers) << ',' << cell.k_max.label() << ',' << s.scene_id;
        for (const auto& c : metric_columns()) f << ',' << format_metric(metric_value(s.report, c));
        f << '\n';
      }
  }
  {
    ordered_json j;
    j["seed"] = spec.seed;
    j["gate_deg"] = rad2deg(spec.eval.gate);
    j["ospa_cutoff_deg"] = rad2deg(spec.eval.ospa.cutoff);
    j["ospa_order"] = spec.eval.ospa.order;
    j["bootstrap"] = {{"fraction", spec.bootstrap.fraction}, {"replicates", spec.bootstrap.replicates}};
    j["scenario"] = scenario_to_json(spec.scenario);
    j["observation"] = observation_to_json(spec.observation);
    j["tracker"] = tracker_to_json(spec.tracker);
    ordered_json cells = ordered_json::array();
    for (const auto& cell : result.cells) {
      ordered_json c;
      c["subset"] = subset_label(cell.n_speakers);
      c["k_max"] = cell.k_max.label();
      c["n_scenes"] = cell.scenes.size();
      c["metrics"] = aggregate_to_json(cell.aggregate);
      cells.push_back(c);
    }
    j["cells"] = cells;
    std::ofstream f(out_dir / "aggregate.json", std::ios::binary | std::ios::trunc);
    f << j.dump(2) << '\n';
  }
}

std::vector<TrendCheck> check_trends(const SweepResult& result,
                                     const std::vector<std::pair<std::string, Trend>>& rules) {
  std::vector<TrendCheck> checks;
  std::map<std::size_t, std::vector<const SweepCell*>> by_subset;
  for (const auto& cell : result.cells) by_subset[cell.n_speakers].push_back(&cell);

  for (auto& [n_speakers, cells] : by_subset) {
    std::stable_sort(cells.begin(), cells.end(), [n = n_speakers](const SweepCell* a, const SweepCell* b) {
      return a->k_max.order_key(n) < b->k_max.order_key(n);
    });
    for (const auto& [metric, trend] : rules) {
      TrendCheck check{subset_label(n_speakers), metric, true, ""};
      std::ostringstream detail;
      // Signed so that "better along the trend" is always positive.
      const double sign = trend == Trend::kNonDecreasing ? 1.0 : -1.0;
      std::vector<double> means, stds;
      for (const auto* c : cells) {
        const auto& a = c->aggregate.at(metric);
        if (!a.mean) {
          check.passed = false;
          detail << "undefined mean at k_max=" << c->k_max.label() << "; ";
          continue;
        }
        means.push_back(*a.mean);
        stds.push_back(a.std.value_or(0.0));
        detail << c->k_max.label() << '=' << format_metric(a.mean) << ' ';
      }
      if (check.passed && means.size() >= 2) {
        if (!(sign * (means.back() - means.front()) > 0.0)) {
          check.passed = false;
          detail << "| endpoints not strictly ordered ";
        }
        for (std::size_t i = 0; i + 1 < means.size(); ++i) {
          const double inversion = -sign * (means[i + 1] - means[i]);
          const double margin = std::max(stds[i], stds[i + 1]);
          if (inversion > margin) {
            check.passed = false;
            detail << "| inversion " << format_metric(inversion) << " > margin " << format_metric(margin) << " at step "
                   << i << ' ';
          }
        }
      }
      check.detail = detail.str();
      checks.push_back(std::move(check));
    }
  }
  return checks;
}

// ---------------------------------------------------------------------------
// Lint

std::vector<LintIssue> lint_corpus(const fs::path& dir) {
  std::vector<LintIssue> issues;
  std::optional<json> corpus;
  try {
    corpus = read_corpus_json(dir);
  } catch (const std::exception& e) {
    issues.push_back({"corpus.json", e.what()});
  }
  bool piecewise_constant = false;
  std::optional<std::size_t> n_speakers;
  if (corpus) {
    const auto mode = corpus->value("mode", std::string{});
    piecewise_constant = mode == "jump" || mode == "static";
    if (corpus->contains("n_speakers")) n_speakers = corpus->at("n_speakers").get<std::size_t>();
  }
  for (const auto& id : list_scenes(dir)) {
    try {
      const FrameGrid grid = read_manifest(manifest_path(dir, id));
      const TrackSet gt = read_trackset(truth_path(dir, id), grid);
      if (n_speakers && gt.n_tracks() != *n_speakers)
        issues.push_back({id, "expected " + std::to_string(*n_speakers) + " ground-truth tracks, found " +
                                  std::to_string(gt.n_tracks())});
      if (piecewise_constant) {
        for (const auto& [tid, traj] : gt.tracks()) {
          std::optional<std::pair<std::size_t, Direction>> prev;
          for (const auto& [f, dir_] : traj) {
            if (prev && prev->first + 1 == f && !(prev->second == dir_))
              issues.push_back({id, "track '" + tid + "' changes direction inside an active run at frame " +
                                        std::to_string(f)});
            prev = std::make_pair(f, dir_);
          }
        }
      }
      const auto op = observation_path(dir, id);
      if (fs::exists(op)) read_observations(op, grid);
    } catch (const std::exception& e) {
      issues.push_back({id, e.what()});
    }
  }
  return issues;
}

}  // namespace idtrack
