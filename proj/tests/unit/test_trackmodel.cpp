#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

#include "idtrack/errors.hpp"
#include "idtrack/random.hpp"
#include "idtrack/trackmodel.hpp"

namespace idtrack {
namespace {

TrackSet two_track_set() {
  TrackSet ts(FrameGrid{0.1, 5});
  ts.add("b", 0, Direction::from_degrees(10.0, 5.0));
  ts.add("a", 0, Direction::from_degrees(-20.0, 0.0));
  ts.add("a", 1, Direction::from_degrees(-21.5, 0.25));
  ts.add("b", 3, Direction::from_degrees(179.9999999, -45.0));
  return ts;
}

TEST(FrameGrid, ValidateAndDuration) {
  EXPECT_NO_THROW((FrameGrid{0.1, 600}.validate()));
  EXPECT_NEAR((FrameGrid{0.1, 600}.duration()), 60.0, 1e-9);
  EXPECT_THROW((FrameGrid{0.0, 10}.validate()), InvalidConfig);
  EXPECT_THROW((FrameGrid{0.1, 0}.validate()), InvalidConfig);
  EXPECT_TRUE((FrameGrid{0.1, 5}.compatible_with(FrameGrid{0.1 + 1e-15, 5})));
  EXPECT_FALSE((FrameGrid{0.1, 5}.compatible_with(FrameGrid{0.1, 6})));
}

TEST(TrackSet, AddRejectsDuplicatesAndOutOfGrid) {
  TrackSet ts(FrameGrid{0.1, 3});
  ts.add("x", 0, Direction{});
  EXPECT_THROW(ts.add("x", 0, Direction{}), DuplicateEntry);
  EXPECT_THROW(ts.add("x", 3, Direction{}), std::out_of_range);
  EXPECT_THROW(ts.trajectory("nope"), UnknownTrack);
  EXPECT_EQ(ts.n_entries(), 1u);
}

TEST(TrackSet, ByFrameIsSortedById) {
  const auto frames = two_track_set().by_frame();
  ASSERT_EQ(frames.size(), 5u);
  ASSERT_EQ(frames[0].size(), 2u);
  EXPECT_EQ(frames[0][0].id, "a");
  EXPECT_EQ(frames[0][1].id, "b");
  EXPECT_TRUE(frames[2].empty());
}

TEST(TrackSet, ActivityMask) {
  const auto mask = activity_mask(two_track_set(), "b");
  EXPECT_EQ(mask, (std::vector<bool>{true, false, false, true, false}));
  EXPECT_THROW(activity_mask(two_track_set(), "zz"), UnknownTrack);
}

TEST(Format, AzimuthWrapsAfterRounding) {
  EXPECT_EQ(format_azimuth_deg(deg2rad(179.9999999)), "-180.000000");
  EXPECT_EQ(format_azimuth_deg(deg2rad(-0.0000001)), "0.000000");
  EXPECT_EQ(format_fixed6(-0.0000001), "0.000000");
  EXPECT_EQ(format_fixed6(12.3456789), "12.345679");
}

TEST(TrackCsv, WritesExpectedText) {
  std::ostringstream out;
  write_trackset(two_track_set(), out);
  EXPECT_EQ(out.str(),
            "frame,time_s,track_id,azimuth_deg,elevation_deg\n"
            "0,0.000000,a,-20.000000,0.000000\n"
            "0,0.000000,b,10.000000,5.000000\n"
            "1,0.100000,a,-21.500000,0.250000\n"
            "3,0.300000,b,-180.000000,-45.000000\n");
}

TEST(TrackCsv, RoundTripIsByteStable) {
  Rng rng(6);
  TrackSet ts(FrameGrid{0.05, 40});
  for (std::size_t f = 0; f < 40; ++f)
    for (int k = 0; k < 3; ++k)
      if (f % (k + 2) != 0) ts.add("trk" + std::to_string(k), f, sample_direction(rng));
  std::ostringstream first;
  write_trackset(ts, first);
  std::istringstream in(first.str());
  const TrackSet back = read_trackset(in, ts.grid());
  std::ostringstream second;
  write_trackset(back, second);
  EXPECT_EQ(first.str(), second.str());
  EXPECT_EQ(back.n_entries(), ts.n_entries());
  for (const auto& [id, traj] : ts.tracks())
    for (const auto& [f, d] : traj) EXPECT_LT(angular_distance(d, back.trajectory(id).at(f)), 1e-7);
}

TEST(TrackCsv, RejectsMalformedInput) {
  const FrameGrid grid{0.1, 4};
  auto parse = [&](const std::string& text) {
    std::istringstream in(text);
    return read_trackset(in, grid);
  };
  const std::string header = "frame,time_s,track_id,azimuth_deg,elevation_deg\n";
  EXPECT_THROW(parse(""), ParseError);
  EXPECT_THROW(parse("frame,time,id,az,el\n"), ParseError);
  EXPECT_THROW(parse(header + "0,0.0,a,1.0\n"), ParseError);
  EXPECT_THROW(parse(header + "0,0.0,a,abc,0.0\n"), ParseError);
  EXPECT_THROW(parse(header + "9,0.9,a,1.0,0.0\n"), ParseError);
  EXPECT_THROW(parse(header + "0,0.0,a,1.0,95.0\n"), ParseError);
  EXPECT_THROW(parse(header + "0,0.0,a,1.0,0.0\n0,0.0,a,2.0,0.0\n"), DuplicateEntry);
  try {
    parse(header + "0,0.0,a,1.0,0.0\n1,0.1,a,x,0.0\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  // CRLF endings are accepted.
  EXPECT_EQ(parse("frame,time_s,track_id,azimuth_deg,elevation_deg\r\n0,0.0,a,1.0,0.0\r\n").n_entries(), 1u);
}

TEST(ObservationCsv, RoundTripKeepsTagsAndOrder) {
  ObservationSet obs(FrameGrid{0.1, 3});
  obs.frames[0] = {{Direction::from_degrees(10, 0), "spk0"}, {Direction::from_degrees(50, 10), std::nullopt}};
  obs.frames[2] = {{Direction::from_degrees(-90, -5), "spk1"}};
  std::ostringstream out;
  write_observations(obs, out);
  EXPECT_EQ(out.str(),
            "frame,time_s,track_id,azimuth_deg,elevation_deg,source_id\n"
            "0,0.000000,o000,10.000000,0.000000,spk0\n"
            "0,0.000000,o001,50.000000,10.000000,\n"
            "2,0.200000,o000,-90.000000,-5.000000,spk1\n");
  std::istringstream in(out.str());
  const auto back = read_observations(in, obs.grid);
  EXPECT_TRUE(back.tagged);
  ASSERT_EQ(back.frames[0].size(), 2u);
  EXPECT_EQ(back.frames[0][0].source, std::optional<TrackId>("spk0"));
  EXPECT_FALSE(back.frames[0][1].source.has_value());
  EXPECT_EQ(back.n_observations(), 3u);
}

TEST(ObservationCsv, FiveColumnFileIsUntagged) {
  std::istringstream in("frame,time_s,track_id,azimuth_deg,elevation_deg\n1,0.1,o000,3.0,4.0\n");
  const auto obs = read_observations(in, FrameGrid{0.1, 2});
  EXPECT_FALSE(obs.tagged);
  ASSERT_EQ(obs.frames[1].size(), 1u);
  EXPECT_FALSE(obs.frames[1][0].source.has_value());
}

TEST(Manifest, RoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "idtrack_manifest_test";
  std::filesystem::create_directories(dir);
  const FrameGrid grid{0.05, 1200};
  write_manifest(grid, dir / "m.json");
  EXPECT_EQ(read_manifest(dir / "m.json"), grid);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace idtrack
