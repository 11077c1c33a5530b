#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "idtrack/geometry.hpp"
#include "idtrack/trackmodel.hpp"

namespace idtrack {

enum class ScenarioMode {
  kJump,          // static while speaking, new candidate position after every silence
  kStatic,        // one position for every segment
  kMoving,        // fully active great-circle trajectory at constant angular speed
  kMovingZeroed,  // moving trajectory with activity deleted on random windows
};

std::string_view to_string(ScenarioMode mode);
ScenarioMode scenario_mode_from_string(std::string_view name);  // InvalidConfig

struct Interval {
  double min = 0.0;
  double max = 0.0;
};

struct ScenarioConfig {
  std::size_t n_speakers = 1;
  std::size_t n_positions = 6;
  double min_separation = deg2rad(60.0);
  double duration_s = 60.0;
  double frame_period_s = 0.1;
  Interval segment_len_s{1.0, 6.0};
  Interval gap_len_s{0.1, 1.0};
  ScenarioMode mode = ScenarioMode::kJump;
  bool exclude_previous = true;   // jump targets differ from the previous position
  bool shared_positions = false;  // one candidate set for all speakers instead of one each
  Interval angular_speed_deg_s{2.0, 10.0};
  std::size_t zeroed_windows = 4;
  Interval zeroed_window_s{1.5, 4.0};
  std::size_t max_attempts = 1000;
  std::uint64_t seed = 0;

  FrameGrid grid() const;
  void validate() const;  // InvalidConfig
};

struct Segment {
  std::size_t begin_frame = 0;  // inclusive
  std::size_t end_frame = 0;    // exclusive
  std::size_t position = 0;     // index into the speaker's candidate set
};

struct SpeakerLayout {
  TrackId id;
  std::vector<Direction> candidates;  // empty in moving modes
  std::vector<Segment> segments;      // empty in moving modes
};

struct Scene {
  TrackSet truth;
  std::vector<SpeakerLayout> speakers;
};

// Ground truth plus the generative layout (candidate sets and segments) behind it.
Scene generate_scene_layout(const ScenarioConfig& cfg);
TrackSet generate_scene(const ScenarioConfig& cfg);

struct ObservationModel {
  double angular_noise_sigma = deg2rad(3.0);  // radians
  double p_miss = 0.02;
  double clutter_rate = 0.1;  // expected false directions per frame
  std::uint64_t seed = 0;

  void validate() const;  // InvalidConfig
};

// Noisy DoA observations standing in for a localizer: each active ground-truth
// direction is detected with probability 1 - p_miss and rotated by a folded-normal
// angle about a uniform heading; Poisson clutter is added uniformly on the sphere.
// Each frame's list is shuffled so detections carry no positional hint.
ObservationSet simulate_observations(const TrackSet& gt, const ObservationModel& om);

}  // namespace idtrack
