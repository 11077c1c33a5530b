#include "idtrack/trackmodel.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string_view>

#include "json.hpp"

#include "idtrack/errors.hpp"

namespace idtrack {

void FrameGrid::validate() const {
  if (!(frame_period > 0.0) || !std::isfinite(frame_period))
    throw InvalidConfig("frame_period_s must be a positive finite number");
  if (n_frames < 1) throw InvalidConfig("n_frames must be >= 1");
}

bool FrameGrid::compatible_with(const FrameGrid& other) const noexcept {
  return n_frames == other.n_frames && std::abs(frame_period - other.frame_period) <= 1e-12;
}

TrackSet::TrackSet(FrameGrid grid) : grid_(grid) { grid_.validate(); }

void TrackSet::add(const TrackId& id, std::size_t frame, const Direction& dir) {
  if (frame >= grid_.n_frames)
    throw std::out_of_range("frame " + std::to_string(frame) + " outside grid of " +
                            std::to_string(grid_.n_frames) + " frames");
  auto [it, inserted] = tracks_[id].emplace(frame, dir);
  if (!inserted)
    throw DuplicateEntry("track '" + id + "' already has an entry at frame " + std::to_string(frame));
}

const TrackSet::Trajectory& TrackSet::trajectory(const TrackId& id) const {
  auto it = tracks_.find(id);
  if (it == tracks_.end()) throw UnknownTrack("unknown track '" + id + "'");
  return it->second;
}

std::vector<TrackId> TrackSet::track_ids() const {
  std::vector<TrackId> ids;
  ids.reserve(tracks_.size());
  for (const auto& [id, _] : tracks_) ids.push_back(id);
  return ids;
}

std::size_t TrackSet::n_entries() const noexcept {
  std::size_t n = 0;
  for (const auto& [_, traj] : tracks_) n += traj.size();
  return n;
}

std::vector<std::vector<TrackEntry>> TrackSet::by_frame() const {
  std::vector<std::vector<TrackEntry>> frames(grid_.n_frames);
  // tracks_ is ordered by id, so each frame comes out sorted.
  for (const auto& [id, traj] : tracks_)
    for (const auto& [f, dir] : traj) frames[f].push_back({id, dir});
  return frames;
}

std::vector<bool> activity_mask(const TrackSet& ts, const TrackId& id) {
  std::vector<bool> mask(ts.grid().n_frames, false);
  for (const auto& [f, _] : ts.trajectory(id)) mask[f] = true;
  return mask;
}

std::size_t ObservationSet::n_observations() const noexcept {
  std::size_t n = 0;
  for (const auto& f : frames) n += f.size();
  return n;
}

// ---------------------------------------------------------------------------
// CSV

std::string format_fixed6(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", value);
  std::string s(buf);
  if (s == "-0.000000") s = "0.000000";
  return s;
}

std::string format_azimuth_deg(double az_rad) {
  double deg = std::round(rad2deg(az_rad) * 1e6) / 1e6;
  if (deg >= 180.0) deg -= 360.0;
  if (deg < -180.0) deg += 360.0;
  return format_fixed6(deg);
}

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view field, std::size_t line_no, const char* name) {
  T value{};
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || field.empty())
    throw ParseError(line_no, std::string("invalid ") + name + " '" + std::string(field) + "'");
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value)) throw ParseError(line_no, std::string("non-finite ") + name);
  }
  return value;
}

void check_id(const TrackId& id) {
  if (id.empty() || id.find_first_of(",\r\n") != std::string::npos)
    throw InvalidConfig("track id '" + id + "' cannot be written to CSV");
}

struct RowReader {
  explicit RowReader(std::istream& stream) : in(stream) {}

  std::istream& in;
  std::size_t line_no = 0;
  std::string line;

  bool next() {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return true;
    }
    return false;
  }
};

std::string read_header(RowReader& rows) {
  if (!rows.next()) throw ParseError(1, "missing header");
  return rows.line;
}

std::ifstream open_in(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) throw Error("cannot open '" + p.string() + "' for reading");
  return f;
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot open '" + p.string() + "' for writing");
  return f;
}

}  // namespace

TrackSet read_trackset(std::istream& in, const FrameGrid& grid) {
  TrackSet ts(grid);
  RowReader rows(in);
  const std::string header = read_header(rows);
  if (header != kTrackCsvHeader) throw ParseError(rows.line_no, "unexpected header '" + header + "'");
  while (rows.next()) {
    const auto fields = split_commas(rows.line);
    if (fields.size() != 5)
      throw ParseError(rows.line_no, "expected 5 fields, got " + std::to_string(fields.size()));
    const auto frame = parse_number<std::size_t>(fields[0], rows.line_no, "frame");
    parse_number<double>(fields[1], rows.line_no, "time_s");
    const TrackId id(fields[2]);
    if (id.empty()) throw ParseError(rows.line_no, "empty track_id");
    const double az = parse_number<double>(fields[3], rows.line_no, "azimuth_deg");
    const double el = parse_number<double>(fields[4], rows.line_no, "elevation_deg");
    if (el < -90.0 || el > 90.0) throw ParseError(rows.line_no, "elevation outside [-90, 90]");
    if (frame >= grid.n_frames)
      throw ParseError(rows.line_no, "frame " + std::to_string(frame) + " outside grid");
    try {
      ts.add(id, frame, Direction::from_degrees(az, el));
    } catch (const DuplicateEntry& e) {
      throw DuplicateEntry("line " + std::to_string(rows.line_no) + ": " + e.what());
    }
  }
  return ts;
}

TrackSet read_trackset(const std::filesystem::path& csv, const FrameGrid& grid) {
  auto f = open_in(csv);
  return read_trackset(f, grid);
}

void write_trackset(const TrackSet& ts, std::ostream& out) {
  out << kTrackCsvHeader << '\n';
  const auto frames = ts.by_frame();
  for (std::size_t f = 0; f < frames.size(); ++f) {
    for (const auto& e : frames[f]) {
      check_id(e.id);
      out << f << ',' << format_fixed6(ts.grid().frame_time(f)) << ',' << e.id << ','
          << format_azimuth_deg(e.direction.azimuth) << ',' << format_fixed6(rad2deg(e.direction.elevation))
          << '\n';
    }
  }
}

void write_trackset(const TrackSet& ts, const std::filesystem::path& csv) {
  auto f = open_out(csv);
  write_trackset(ts, f);
}

ObservationSet read_observations(std::istream& in, const FrameGrid& grid) {
  grid.validate();
  ObservationSet obs(grid);
  RowReader rows(in);
  const std::string header = read_header(rows);
  std::size_t n_fields = 0;
  if (header == kObservationCsvHeader) {
    n_fields = 6;
  } else if (header == kTrackCsvHeader) {
    n_fields = 5;
    obs.tagged = false;
  } else {
    throw ParseError(rows.line_no, "unexpected header '" + header + "'");
  }
  std::vector<std::map<std::string, Observation>> staged(grid.n_frames);
  while (rows.next()) {
    const auto fields = split_commas(rows.line);
    if (fields.size() != n_fields)
      throw ParseError(rows.line_no, "expected " + std::to_string(n_fields) + " fields, got " +
                                         std::to_string(fields.size()));
    const auto frame = parse_number<std::size_t>(fields[0], rows.line_no, "frame");
    parse_number<double>(fields[1], rows.line_no, "time_s");
    if (frame >= grid.n_frames)
      throw ParseError(rows.line_no, "frame " + std::to_string(frame) + " outside grid");
    const std::string id(fields[2]);
    if (id.empty()) throw ParseError(rows.line_no, "empty track_id");
    const double az = parse_number<double>(fields[3], rows.line_no, "azimuth_deg");
    const double el = parse_number<double>(fields[4], rows.line_no, "elevation_deg");
    if (el < -90.0 || el > 90.0) throw ParseError(rows.line_no, "elevation outside [-90, 90]");
    Observation o{Direction::from_degrees(az, el), std::nullopt};
    if (n_fields == 6 && !fields[5].empty()) o.source = std::string(fields[5]);
    if (!staged[frame].emplace(id, std::move(o)).second)
      throw DuplicateEntry("line " + std::to_string(rows.line_no) + ": observation '" + id +
                           "' repeated at frame " + std::to_string(frame));
  }
  for (std::size_t f = 0; f < grid.n_frames; ++f)
    for (auto& [_, o] : staged[f]) obs.frames[f].push_back(std::move(o));
  return obs;
}

ObservationSet read_observations(const std::filesystem::path& csv, const FrameGrid& grid) {
  auto f = open_in(csv);
  return read_observations(f, grid);
}

void write_observations(const ObservationSet& obs, std::ostream& out) {
  out << kObservationCsvHeader << '\n';
  char id[16];
  for (std::size_t f = 0; f < obs.frames.size(); ++f) {
    for (std::size_t k = 0; k < obs.frames[f].size(); ++k) {
      const auto& o = obs.frames[f][k];
      std::snprintf(id, sizeof(id), "o%03zu", k);
      out << f << ',' << format_fixed6(obs.grid.frame_time(f)) << ',' << id << ','
          << format_azimuth_deg(o.direction.azimuth) << ',' << format_fixed6(rad2deg(o.direction.elevation))
          << ',';
      if (o.source) {
        check_id(*o.source);
        out << *o.source;
      }
      out << '\n';
    }
  }
}

void write_observations(const ObservationSet& obs, const std::filesystem::path& csv) {
  auto f = open_out(csv);
  write_observations(obs, f);
}

FrameGrid read_manifest(const std::filesystem::path& json_path) {
  auto f = open_in(json_path);
  nlohmann::json j;
  try {
    f >> j;
    FrameGrid g{j.at("frame_period_s").get<double>(), j.at("n_frames").get<std::size_t>()};
    g.validate();
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(1, json_path.string() + ": " + e.what());
  }
}

void write_manifest(const FrameGrid& grid, const std::filesystem::path& json_path) {
  nlohmann::ordered_json j;
  j["frame_period_s"] = grid.frame_period;
  j["n_frames"] = grid.n_frames;
  auto f = open_out(json_path);
  f << j.dump(2) << '\n';
}

}  // namespace idtrack
