#include "idtrack/config_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>

#include "idtrack/errors.hpp"

namespace idtrack {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const char* what) {
  if (!j.is_object()) throw InvalidConfig(std::string(what) + " must be a JSON object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [k, _] : j.items())
    if (!keys.contains(k)) throw InvalidConfig(std::string(what) + ": unknown key '" + k + "'");
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidConfig(std::string("invalid value for '") + key + "': " + e.what());
  }
}

void read_count(const json& j, const char* key, std::size_t& out) {
  if (!j.contains(key)) return;
  const auto& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw InvalidConfig(std::string("'") + key + "' must be a non-negative integer");
  out = v.get<std::size_t>();
}

void read_deg(const json& j, const char* key, double& out_rad) {
  if (!j.contains(key)) return;
  double deg = 0.0;
  read(j, key, deg);
  out_rad = deg2rad(deg);
}

void read_interval(const json& j, const char* key, Interval& out) {
  if (!j.contains(key)) return;
  const auto& v = j.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw InvalidConfig(std::string("'") + key + "' must be a [min, max] pair");
  out = {v[0].get<double>(), v[1].get<double>()};
}

json interval_json(const Interval& iv) { return json::array({iv.min, iv.max}); }

}  // namespace

ScenarioConfig scenario_from_json(const json& j, ScenarioConfig cfg) {
  reject_unknown(j,
                 {"n_speakers", "n_positions", "min_separation_deg", "duration_s", "frame_period_s", "segment_len_s",
                  "gap_len_s", "mode", "exclude_previous", "shared_positions", "angular_speed_deg_s",
                  "zeroed_windows", "zeroed_window_s", "max_attempts", "seed", "n_scenes", "observation"},
                 "scenario config");
  read_count(j, "n_speakers", cfg.n_speakers);
  read_count(j, "n_positions", cfg.n_positions);
  read_deg(j, "min_separation_deg", cfg.min_separation);
  read(j, "duration_s", cfg.duration_s);
  read(j, "frame_period_s", cfg.frame_period_s);
  read_interval(j, "segment_len_s", cfg.segment_len_s);
  read_interval(j, "gap_len_s", cfg.gap_len_s);
  if (j.contains("mode")) {
    std::string mode;
    read(j, "mode", mode);
    cfg.mode = scenario_mode_from_string(mode);
  }
  read(j, "exclude_previous", cfg.exclude_previous);
  read(j, "shared_positions", cfg.shared_positions);
  read_interval(j, "angular_speed_deg_s", cfg.angular_speed_deg_s);
  read_count(j, "zeroed_windows", cfg.zeroed_windows);
  read_interval(j, "zeroed_window_s", cfg.zeroed_window_s);
  read_count(j, "max_attempts", cfg.max_attempts);
  read(j, "seed", cfg.seed);
  cfg.validate();
  return cfg;
}

nlohmann::ordered_json scenario_to_json(const ScenarioConfig& cfg) {
  nlohmann::ordered_json j;
  j["n_speakers"] = cfg.n_speakers;
  j["n_positions"] = cfg.n_positions;
  j["min_separation_deg"] = rad2deg(cfg.min_separation);
  j["duration_s"] = cfg.duration_s;
  j["frame_period_s"] = cfg.frame_period_s;
  j["segment_len_s"] = interval_json(cfg.segment_len_s);
  j["gap_len_s"] = interval_json(cfg.gap_len_s);
  j["mode"] = std::string(to_string(cfg.mode));
  j["exclude_previous"] = cfg.exclude_previous;
  j["shared_positions"] = cfg.shared_positions;
  j["angular_speed_deg_s"] = interval_json(cfg.angular_speed_deg_s);
  j["zeroed_windows"] = cfg.zeroed_windows;
  j["zeroed_window_s"] = interval_json(cfg.zeroed_window_s);
  j["max_attempts"] = cfg.max_attempts;
  j["seed"] = cfg.seed;
  return j;
}

ObservationModel observation_from_json(const json& j, ObservationModel om) {
  reject_unknown(j, {"angular_noise_sigma_deg", "p_miss", "clutter_rate", "seed"}, "observation model");
  read_deg(j, "angular_noise_sigma_deg", om.angular_noise_sigma);
  read(j, "p_miss", om.p_miss);
  read(j, "clutter_rate", om.clutter_rate);
  read(j, "seed", om.seed);
  om.validate();
  return om;
}

nlohmann::ordered_json observation_to_json(const ObservationModel& om) {
  nlohmann::ordered_json j;
  j["angular_noise_sigma_deg"] = rad2deg(om.angular_noise_sigma);
  j["p_miss"] = om.p_miss;
  j["clutter_rate"] = om.clutter_rate;
  j["seed"] = om.seed;
  return j;
}

std::optional<std::size_t> KMaxSpec::resolve(std::size_t n_speakers) const {
  switch (kind) {
    case Kind::kAbsolute: return value;
    case Kind::kMultipleOfJ: return value * n_speakers;
    case Kind::kUnbounded: return std::nullopt;
  }
  return std::nullopt;
}

std::string KMaxSpec::label() const {
  switch (kind) {
    case Kind::kAbsolute: return std::to_string(value);
    case Kind::kMultipleOfJ: return value == 1 ? "J" : std::to_string(value) + "J";
    case Kind::kUnbounded: return "inf";
  }
  return "?";
}

double KMaxSpec::order_key(std::size_t n_speakers) const {
  const auto r = resolve(n_speakers);
  return r ? static_cast<double>(*r) : std::numeric_limits<double>::infinity();
}

KMaxSpec kmax_from_json(const json& j) {
  KMaxSpec k;
  if (j.is_null()) return k;
  if (j.is_number_integer()) {
    if (j.get<long long>() < 1) throw InvalidConfig("k_max must be >= 1");
    k.kind = KMaxSpec::Kind::kAbsolute;
    k.value = j.get<std::size_t>();
    return k;
  }
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "unbounded") return k;
    if (!s.empty() && s.back() == 'J') {
      const auto prefix = s.substr(0, s.size() - 1);
      std::size_t m = 1;
      if (!prefix.empty()) {
        if (!std::all_of(prefix.begin(), prefix.end(), [](char c) { return c >= '0' && c <= '9'; }))
          throw InvalidConfig("invalid k_max '" + s + "'");
        m = std::stoul(prefix);
      }
      if (m < 1) throw InvalidConfig("invalid k_max '" + s + "'");
      k.kind = KMaxSpec::Kind::kMultipleOfJ;
      k.value = m;
      return k;
    }
  }
  throw InvalidConfig("k_max must be an integer, \"J\", \"<m>J\" or \"inf\"");
}

TrackerConfig TrackerSpec::resolve(std::size_t n_speakers, std::uint64_t seed) const {
  TrackerConfig cfg = pf;
  cfg.max_active = max_active.value_or(n_speakers);
  cfg.k_max = k_max.resolve(n_speakers);
  cfg.seed = seed;
  cfg.validate();
  return cfg;
}

TrackerSpec tracker_from_json(const json& j) {
  reject_unknown(j,
                 {"tracker", "k_max", "max_active", "assoc_gate_deg", "birth_frames", "death_frames", "n_particles",
                  "process_noise_sigma_deg", "obs_sigma_deg", "id_reuse", "displace_silent", "hold_frames", "seed",
                  "k", "period_s"},
                 "tracker config");
  TrackerSpec spec;
  if (j.contains("tracker")) {
    std::string name;
    read(j, "tracker", name);
    if (name == "pf") spec.kind = TrackerKind::kPf;
    else if (name == "oracle") spec.kind = TrackerKind::kOracle;
    else if (name == "splitter") spec.kind = TrackerKind::kSplitter;
    else if (name == "merger") spec.kind = TrackerKind::kMerger;
    else if (name == "swapper") spec.kind = TrackerKind::kSwapper;
    else throw InvalidConfig("unknown tracker '" + name + "'");
  }
  if (j.contains("k_max")) spec.k_max = kmax_from_json(j.at("k_max"));
  if (j.contains("max_active")) {
    const auto& v = j.at("max_active");
    if (v.is_string() && v.get<std::string>() == "J") spec.max_active.reset();
    else if (v.is_number_integer() && v.get<long long>() >= 1) spec.max_active = v.get<std::size_t>();
    else throw InvalidConfig("max_active must be a positive integer or \"J\"");
  }
  read_deg(j, "assoc_gate_deg", spec.pf.assoc_gate);
  read_count(j, "birth_frames", spec.pf.birth_frames);
  read_count(j, "death_frames", spec.pf.death_frames);
  read_count(j, "n_particles", spec.pf.n_particles);
  read_deg(j, "process_noise_sigma_deg", spec.pf.process_noise_sigma);
  read_deg(j, "obs_sigma_deg", spec.pf.obs_sigma);
  if (j.contains("id_reuse")) {
    std::string policy;
    read(j, "id_reuse", policy);
    if (policy == "longest_dead") spec.pf.id_reuse = IdReuse::kLongestDead;
    else if (policy == "most_recently_dead") spec.pf.id_reuse = IdReuse::kMostRecentlyDead;
    else throw InvalidConfig("id_reuse must be \"longest_dead\" or \"most_recently_dead\"");
  }
  read(j, "displace_silent", spec.pf.displace_silent);
  read_count(j, "hold_frames", spec.pf.hold_frames);
  read(j, "seed", spec.pf.seed);
  read_count(j, "k", spec.split_k);
  read(j, "period_s", spec.swap_period_s);
  return spec;
}

nlohmann::ordered_json tracker_to_json(const TrackerSpec& spec) {
  static const char* names[] = {"pf", "oracle", "splitter", "merger", "swapper"};
  nlohmann::ordered_json j;
  j["tracker"] = names[static_cast<int>(spec.kind)];
  j["k_max"] = spec.k_max.label();
  if (spec.max_active) j["max_active"] = *spec.max_active;
  else j["max_active"] = "J";
  j["assoc_gate_deg"] = rad2deg(spec.pf.assoc_gate);
  j["birth_frames"] = spec.pf.birth_frames;
  j["death_frames"] = spec.pf.death_frames;
  j["n_particles"] = spec.pf.n_particles;
  j["process_noise_sigma_deg"] = rad2deg(spec.pf.process_noise_sigma);
  j["obs_sigma_deg"] = rad2deg(spec.pf.obs_sigma);
  j["id_reuse"] = spec.pf.id_reuse == IdReuse::kLongestDead ? "longest_dead" : "most_recently_dead";
  j["displace_silent"] = spec.pf.displace_silent;
  j["hold_frames"] = spec.pf.hold_frames;
  j["seed"] = spec.pf.seed;
  j["k"] = spec.split_k;
  j["period_s"] = spec.swap_period_s;
  return j;
}

json load_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InvalidConfig("cannot open config '" + path + "'");
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    throw InvalidConfig("malformed JSON in '" + path + "': " + e.what());
  }
}

}  // namespace idtrack
