#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"

#include "idtrack/scenesim.hpp"
#include "idtrack/trackers.hpp"

namespace idtrack {

// JSON documents mirror the config structs; angles are in degrees and carry a `_deg`
// suffix. Unknown keys are rejected with InvalidConfig.

ScenarioConfig scenario_from_json(const nlohmann::json& j, ScenarioConfig base = {});
nlohmann::ordered_json scenario_to_json(const ScenarioConfig& cfg);

ObservationModel observation_from_json(const nlohmann::json& j, ObservationModel base = {});
nlohmann::ordered_json observation_to_json(const ObservationModel& om);

// K_max as written in configs: an integer, "J" / "<m>J" (multiple of the speaker
// count), or "inf" / null for unbounded.
struct KMaxSpec {
  enum class Kind { kAbsolute, kMultipleOfJ, kUnbounded };
  Kind kind = Kind::kUnbounded;
  std::size_t value = 0;

  std::optional<std::size_t> resolve(std::size_t n_speakers) const;
  std::string label() const;
  // Sort key for trend checks; unbounded sorts last.
  double order_key(std::size_t n_speakers) const;
};

KMaxSpec kmax_from_json(const nlohmann::json& j);

enum class TrackerKind { kPf, kOracle, kSplitter, kMerger, kSwapper };

struct TrackerSpec {
  TrackerKind kind = TrackerKind::kPf;
  TrackerConfig pf;  // k_max and max_active resolved per corpus from the specs below
  KMaxSpec k_max;
  std::optional<std::size_t> max_active;  // default: number of speakers
  std::size_t split_k = 2;
  double swap_period_s = 5.0;

  TrackerConfig resolve(std::size_t n_speakers, std::uint64_t seed) const;
};

TrackerSpec tracker_from_json(const nlohmann::json& j);
nlohmann::ordered_json tracker_to_json(const TrackerSpec& spec);

nlohmann::json load_json_file(const std::string& path);  // InvalidConfig on failure

}  // namespace idtrack
