#include "idtrack/scenesim.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "idtrack/errors.hpp"

namespace idtrack {

std::string_view to_string(ScenarioMode mode) {
  switch (mode) {
    case ScenarioMode::kJump: return "jump";
    case ScenarioMode::kStatic: return "static";
    case ScenarioMode::kMoving: return "moving";
    case ScenarioMode::kMovingZeroed: return "moving_zeroed";
  }
  return "unknown";
}

ScenarioMode scenario_mode_from_string(std::string_view name) {
  if (name == "jump") return ScenarioMode::kJump;
  if (name == "static") return ScenarioMode::kStatic;
  if (name == "moving") return ScenarioMode::kMoving;
  if (name == "moving_zeroed") return ScenarioMode::kMovingZeroed;
  throw InvalidConfig("unknown scenario mode '" + std::string(name) + "'");
}

FrameGrid ScenarioConfig::grid() const {
  const auto n = static_cast<std::size_t>(std::llround(duration_s / frame_period_s));
  return {frame_period_s, std::max<std::size_t>(n, 1)};
}

namespace {

void check_interval(const Interval& iv, const char* name, bool allow_zero = false) {
  const bool lo_ok = allow_zero ? iv.min >= 0.0 : iv.min > 0.0;
  if (!lo_ok || !(iv.max >= iv.min) || !std::isfinite(iv.max))
    throw InvalidConfig(std::string(name) + " must satisfy 0 < min <= max");
}

}  // namespace

void ScenarioConfig::validate() const {
  if (n_speakers < 1) throw InvalidConfig("n_speakers must be >= 1");
  if (!(duration_s > 0.0) || !std::isfinite(duration_s)) throw InvalidConfig("duration_s must be positive");
  if (!(frame_period_s > 0.0) || frame_period_s > duration_s)
    throw InvalidConfig("frame_period_s must be in (0, duration_s]");
  check_interval(segment_len_s, "segment_len_s");
  check_interval(gap_len_s, "gap_len_s");
  if (gap_len_s.max > duration_s) throw InvalidConfig("gap_len_s must lie within (0, duration_s]");
  if (mode == ScenarioMode::kJump || mode == ScenarioMode::kStatic) {
    if (n_positions < 1) throw InvalidConfig("n_positions must be >= 1");
    if (mode == ScenarioMode::kJump && n_positions < 2) throw InvalidConfig("jump mode needs n_positions >= 2");
    if (!(min_separation > 0.0 && min_separation <= kPi)) throw InvalidConfig("min_separation must be in (0, 180] deg");
  }
  if (mode == ScenarioMode::kMoving || mode == ScenarioMode::kMovingZeroed)
    check_interval(angular_speed_deg_s, "angular_speed_deg_s", true);
  if (mode == ScenarioMode::kMovingZeroed) {
    check_interval(zeroed_window_s, "zeroed_window_s");
    if (zeroed_window_s.max > duration_s) throw InvalidConfig("zeroed_window_s must fit within duration_s");
  }
  if (max_attempts < 1) throw InvalidConfig("max_attempts must be >= 1");
}

namespace {

std::size_t frames_for(double seconds, double period) {
  // Round up so a drawn length never falls below its configured minimum.
  const double frames = std::ceil(seconds / period - 1e-9);
  return std::max<std::size_t>(1, static_cast<std::size_t>(frames));
}

double uniform(Rng& rng, const Interval& iv) {
  if (iv.max <= iv.min) return iv.min;
  return std::uniform_real_distribution<double>(iv.min, iv.max)(rng);
}

std::size_t pick_position(Rng& rng, std::size_t n, std::optional<std::size_t> previous, bool exclude_previous) {
  if (previous && exclude_previous && n > 1) {
    const auto k = std::uniform_int_distribution<std::size_t>(0, n - 2)(rng);
    return k >= *previous ? k + 1 : k;
  }
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

void layout_segments(const ScenarioConfig& cfg, const FrameGrid& grid, Rng& rng, SpeakerLayout& spk) {
  const bool jump = cfg.mode == ScenarioMode::kJump;
  const std::size_t fixed = std::uniform_int_distribution<std::size_t>(0, spk.candidates.size() - 1)(rng);
  std::optional<std::size_t> previous;
  std::size_t cursor = 0;
  while (cursor < grid.n_frames) {
    const std::size_t len = frames_for(uniform(rng, cfg.segment_len_s), grid.frame_period);
    const std::size_t pos = jump ? pick_position(rng, spk.candidates.size(), previous, cfg.exclude_previous) : fixed;
    spk.segments.push_back({cursor, std::min(cursor + len, grid.n_frames), pos});
    previous = pos;
    cursor += len;
    cursor += frames_for(uniform(rng, cfg.gap_len_s), grid.frame_period);
  }
}

std::string speaker_id(std::size_t i) { return "spk" + std::to_string(i); }

}  // namespace

Scene generate_scene_layout(const ScenarioConfig& cfg) {
  cfg.validate();
  const FrameGrid grid = cfg.grid();
  Rng rng(cfg.seed);
  Scene scene{TrackSet(grid), {}};

  const bool positional = cfg.mode == ScenarioMode::kJump || cfg.mode == ScenarioMode::kStatic;
  std::vector<Direction> shared;
  if (positional && cfg.shared_positions)
    shared = sample_separated_set(cfg.n_positions, cfg.min_separation, rng, cfg.max_attempts);

  for (std::size_t s = 0; s < cfg.n_speakers; ++s) {
    SpeakerLayout spk{speaker_id(s), {}, {}};
    if (positional) {
      spk.candidates = cfg.shared_positions
                           ? shared
                           : sample_separated_set(cfg.n_positions, cfg.min_separation, rng, cfg.max_attempts);
      layout_segments(cfg, grid, rng, spk);
      for (const auto& seg : spk.segments)
        for (std::size_t f = seg.begin_frame; f < seg.end_frame; ++f)
          scene.truth.add(spk.id, f, spk.candidates[seg.position]);
    } else {
      const Eigen::Vector3d start = sample_unit_vector(rng);
      const double heading = std::uniform_real_distribution<double>(-kPi, kPi)(rng);
      const double speed = deg2rad(uniform(rng, cfg.angular_speed_deg_s));
      for (std::size_t f = 0; f < grid.n_frames; ++f)
        scene.truth.add(spk.id, f,
                        Direction::from_unit_vector(rotate_toward(start, speed * grid.frame_time(f), heading)));
    }
    scene.speakers.push_back(std::move(spk));
  }

  if (cfg.mode == ScenarioMode::kMovingZeroed) {
    // Separate stream: the underlying trajectories match kMoving under the same seed.
    Rng zero_rng(derive_seed(cfg.seed, 0x2e60));
    TrackSet zeroed(grid);
    for (const auto& spk : scene.speakers) {
      std::vector<bool> keep(grid.n_frames, true);
      for (std::size_t w = 0; w < cfg.zeroed_windows; ++w) {
        const double len = uniform(zero_rng, cfg.zeroed_window_s);
        const double start = std::uniform_real_distribution<double>(0.0, cfg.duration_s - len)(zero_rng);
        const auto first = static_cast<std::size_t>(std::ceil(start / grid.frame_period - 1e-9));
        const std::size_t last = std::min(grid.n_frames, first + frames_for(len, grid.frame_period));
        for (std::size_t f = first; f < last; ++f) keep[f] = false;
      }
      for (const auto& [f, dir] : scene.truth.trajectory(spk.id))
        if (keep[f]) zeroed.add(spk.id, f, dir);
    }
    scene.truth = std::move(zeroed);
  }
  return scene;
}

TrackSet generate_scene(const ScenarioConfig& cfg) { return generate_scene_layout(cfg).truth; }

void ObservationModel::validate() const {
  if (!(angular_noise_sigma >= 0.0) || !std::isfinite(angular_noise_sigma))
    throw InvalidConfig("angular_noise_sigma must be >= 0");
  if (!(p_miss >= 0.0 && p_miss <= 1.0)) throw InvalidConfig("p_miss must be in [0, 1]");
  if (!(clutter_rate >= 0.0) || !std::isfinite(clutter_rate)) throw InvalidConfig("clutter_rate must be >= 0");
}

ObservationSet simulate_observations(const TrackSet& gt, const ObservationModel& om) {
  om.validate();
  Rng rng(om.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ObservationSet obs(gt.grid());
  obs.tagged = true;
  const auto frames = gt.by_frame();
  for (std::size_t f = 0; f < frames.size(); ++f) {
    auto& out = obs.frames[f];
    for (const auto& e : frames[f]) {
      const bool detected = unit(rng) >= om.p_miss;
      const Eigen::Vector3d noisy = perturb(e.direction.unit_vector(), om.angular_noise_sigma, rng);
      if (detected)
        out.push_back({om.angular_noise_sigma > 0.0 ? Direction::from_unit_vector(noisy) : e.direction, e.id});
    }
    if (om.clutter_rate > 0.0) {
      const int n_clutter = std::poisson_distribution<int>(om.clutter_rate)(rng);
      for (int k = 0; k < n_clutter; ++k) out.push_back({sample_direction(rng), std::nullopt});
    }
    std::shuffle(out.begin(), out.end(), rng);
  }
  return obs;
}

}  // namespace idtrack
