#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "idtrack/geometry.hpp"

namespace idtrack {

struct FrameGrid {
  double frame_period = 0.1;  // seconds
  std::size_t n_frames = 1;

  double duration() const noexcept { return frame_period * static_cast<double>(n_frames); }
  double frame_time(std::size_t frame) const noexcept { return frame_period * static_cast<double>(frame); }

  // Throws InvalidConfig when the grid is degenerate.
  void validate() const;

  // Same frame count and frame period within 1e-12 s.
  bool compatible_with(const FrameGrid& other) const noexcept;

  friend bool operator==(const FrameGrid&, const FrameGrid&) = default;
};

// Track identities are opaque; predictions and ground truths live in unrelated namespaces.
using TrackId = std::string;

struct TrackEntry {
  TrackId id;
  Direction direction;
};

// Identity-labelled, time-sparse direction trajectories. A track is inactive at
// every frame for which it has no entry.
class TrackSet {
public:
  using Trajectory = std::map<std::size_t, Direction>;

  TrackSet() = default;
  explicit TrackSet(FrameGrid grid);

  const FrameGrid& grid() const noexcept { return grid_; }
  const std::map<TrackId, Trajectory>& tracks() const noexcept { return tracks_; }

  // Throws DuplicateEntry if (id, frame) already has a direction and
  // std::out_of_range if frame >= n_frames.
  void add(const TrackId& id, std::size_t frame, const Direction& dir);

  bool has_track(const TrackId& id) const { return tracks_.contains(id); }
  const Trajectory& trajectory(const TrackId& id) const;  // UnknownTrack
  std::vector<TrackId> track_ids() const;
  std::size_t n_tracks() const noexcept { return tracks_.size(); }
  std::size_t n_entries() const noexcept;

  // Active entries grouped by frame, each frame sorted by track id.
  std::vector<std::vector<TrackEntry>> by_frame() const;

  friend bool operator==(const TrackSet&, const TrackSet&) = default;

private:
  FrameGrid grid_;
  std::map<TrackId, Trajectory> tracks_;
};

// True exactly at the frames where `id` is active. Throws UnknownTrack.
std::vector<bool> activity_mask(const TrackSet& ts, const TrackId& id);

struct Observation {
  Direction direction;
  std::optional<TrackId> source;  // ground-truth id; absent for clutter
};

struct ObservationSet {
  FrameGrid grid;
  std::vector<std::vector<Observation>> frames;
  // False when the producer carried no source information at all (e.g. a CSV without
  // the source_id column). Clutter is untagged even when this is true.
  bool tagged = true;

  explicit ObservationSet(FrameGrid g = {}) : grid(g), frames(g.n_frames) {}
  std::size_t n_observations() const noexcept;
};

// CSV: header `frame,time_s,track_id,azimuth_deg,elevation_deg`, one row per active
// (track, frame), rows sorted by (frame, track_id), angles with 6 decimals, LF endings.
inline constexpr const char* kTrackCsvHeader = "frame,time_s,track_id,azimuth_deg,elevation_deg";
inline constexpr const char* kObservationCsvHeader = "frame,time_s,track_id,azimuth_deg,elevation_deg,source_id";

TrackSet read_trackset(std::istream& in, const FrameGrid& grid);
TrackSet read_trackset(const std::filesystem::path& csv, const FrameGrid& grid);
void write_trackset(const TrackSet& ts, std::ostream& out);
void write_trackset(const TrackSet& ts, const std::filesystem::path& csv);

// Observation rows use ids `o000`, `o001`, ... in per-frame order; source_id is empty
// for clutter. A file without the source_id column reads back as untagged.
ObservationSet read_observations(std::istream& in, const FrameGrid& grid);
ObservationSet read_observations(const std::filesystem::path& csv, const FrameGrid& grid);
void write_observations(const ObservationSet& obs, std::ostream& out);
void write_observations(const ObservationSet& obs, const std::filesystem::path& csv);

// Sidecar manifest: {"frame_period_s": ..., "n_frames": ...}
FrameGrid read_manifest(const std::filesystem::path& json_path);
void write_manifest(const FrameGrid& grid, const std::filesystem::path& json_path);

// Angle formatting used by every CSV writer (degrees, 6 decimals, azimuth wrapped
// to [-180, 180) after rounding).
std::string format_azimuth_deg(double az_rad);
std::string format_fixed6(double value);

}  // namespace idtrack
