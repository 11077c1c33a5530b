#include <set>

#include <gtest/gtest.h>

#include "idtrack/errors.hpp"
#include "idtrack/evaluation.hpp"
#include "idtrack/scenesim.hpp"
#include "idtrack/trackers.hpp"

namespace idtrack {
namespace {

const Direction kA = Direction::from_degrees(0, 0);
const Direction kB = Direction::from_degrees(90, 0);
const Direction kC = Direction::from_degrees(-120, 30);

// Noise-free, clutter-free observations of (direction, first frame, end frame) pieces.
ObservationSet clean_observations(std::size_t n_frames,
                                  const std::vector<std::tuple<Direction, std::size_t, std::size_t>>& pieces) {
  ObservationSet obs(FrameGrid{0.1, n_frames});
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    const auto& [d, begin, end] = pieces[k];
    for (std::size_t f = begin; f < end; ++f) obs.frames[f].push_back({d, "s" + std::to_string(k)});
  }
  return obs;
}

TrackerConfig exact_config() {
  TrackerConfig cfg;
  cfg.birth_frames = 1;
  cfg.death_frames = 3;
  cfg.process_noise_sigma = 0.0;
  cfg.obs_sigma = 1e-9;
  cfg.hold_frames = 0;
  cfg.displace_silent = false;
  return cfg;
}

std::set<TrackId> ids_of(const TrackSet& ts) {
  const auto v = ts.track_ids();
  return {v.begin(), v.end()};
}

TEST(OracleTracker, GroupsBySourceAndDropsClutter) {
  auto obs = clean_observations(10, {{kA, 0, 10}, {kB, 2, 6}});
  obs.frames[3].push_back({kC, std::nullopt});
  const auto out = oracle_tracker(obs);
  EXPECT_EQ(ids_of(out), (std::set<TrackId>{"p_s0", "p_s1"}));
  EXPECT_EQ(out.n_entries(), 14u);
  obs.tagged = false;
  EXPECT_THROW(oracle_tracker(obs), MissingTags);
}

TEST(OracleTracker, GapsFollowMisses) {
  TrackSet gt(FrameGrid{0.1, 300});
  for (std::size_t f = 0; f < 300; ++f) gt.add("g", f, kA);
  const auto obs = simulate_observations(gt, ObservationModel{0.0, 0.2, 0.0, 4});
  const auto out = oracle_tracker(obs);
  for (std::size_t f = 0; f < 300; ++f)
    EXPECT_EQ(out.trajectory("p_g").contains(f), !obs.frames[f].empty()) << "frame " << f;
  EXPECT_LT(out.n_entries(), 300u);
}

TEST(Adversaries, SplitterSpans) {
  TrackSet gt(FrameGrid{0.1, 10});
  for (std::size_t f = 0; f < 9; ++f) gt.add("g", f, kA);
  const auto out = splitter_tracker(gt, 3);
  EXPECT_EQ(ids_of(out), (std::set<TrackId>{"g#0", "g#1", "g#2"}));
  for (const auto& id : out.track_ids()) EXPECT_EQ(out.trajectory(id).size(), 3u);
  EXPECT_THROW(splitter_tracker(gt, 0), InvalidK);
  EXPECT_THROW(splitter_tracker(gt, 10), InvalidK);
}

TEST(Adversaries, MergerKeepsLowestIdPerFrame) {
  TrackSet gt(FrameGrid{0.1, 4});
  gt.add("b", 0, kB);
  gt.add("a", 1, kA);
  gt.add("b", 1, kB);
  const auto out = merger_tracker(gt);
  EXPECT_EQ(ids_of(out), (std::set<TrackId>{"merged"}));
  EXPECT_EQ(out.trajectory("merged").at(0), kB);
  EXPECT_EQ(out.trajectory("merged").at(1), kA);
  EXPECT_FALSE(out.trajectory("merged").contains(2));
}

TEST(Adversaries, SwapperExchangesLabelsOnOddPeriods) {
  TrackSet gt(FrameGrid{0.1, 40});
  for (std::size_t f = 0; f < 40; ++f) {
    gt.add("a", f, kA);
    gt.add("b", f, kB);
  }
  const auto out = swapper_tracker(gt, 1.0);
  EXPECT_EQ(out.trajectory("p_a").at(5), kA);
  EXPECT_EQ(out.trajectory("p_a").at(15), kB);
  EXPECT_EQ(out.trajectory("p_b").at(15), kA);
  EXPECT_EQ(out.trajectory("p_a").at(25), kA);
  const auto r = evaluate_scene(out, gt);
  EXPECT_EQ(r.frame.n_swaps, 6u);
  TrackSet single(FrameGrid{0.1, 4});
  single.add("a", 0, kA);
  EXPECT_THROW(swapper_tracker(single, 1.0), InvalidConfig);
}

TEST(TrackerConfig, Validation) {
  EXPECT_NO_THROW(TrackerConfig{}.validate());
  TrackerConfig cfg;
  cfg.k_max = 1;
  cfg.max_active = 2;
  EXPECT_THROW(cfg.validate(), InvalidConfig);
  cfg = TrackerConfig{};
  cfg.birth_frames = 0;
  EXPECT_THROW(cfg.validate(), InvalidConfig);
  cfg = TrackerConfig{};
  cfg.death_frames = 0;
  EXPECT_THROW(ParticleFilterTracker{cfg}, InvalidConfig);
}

TEST(PfTracker, NoiseFreeStaticSourceMatchesOracle) {
  const auto obs = clean_observations(100, {{kC, 0, 100}});
  const auto out = pf_tracker(obs, exact_config());
  EXPECT_EQ(out.n_tracks(), 1u);
  TrackSet gt(obs.grid);
  for (std::size_t f = 0; f < 100; ++f) gt.add("g", f, kC);
  const auto r = evaluate_scene(out, gt);
  ASSERT_TRUE(r.assoc);
  EXPECT_EQ(r.assoc->ass_a, 1.0);
  EXPECT_EQ(r.frame.tsr, 0.0);
  ASSERT_TRUE(r.frame.mean_loc_error);
  EXPECT_LT(*r.frame.mean_loc_error, 1e-6);
}

TEST(PfTracker, BirthLatency) {
  auto cfg = exact_config();
  cfg.birth_frames = 3;
  const auto out = pf_tracker(clean_observations(20, {{kA, 0, 20}}), cfg);
  EXPECT_EQ(out.trajectory("t0").begin()->first, 2u);
  EXPECT_EQ(out.trajectory("t0").size(), 18u);
}

TEST(PfTracker, JumpsWithUnboundedIdsSplitPerSegment) {
  ScenarioConfig sc;
  sc.seed = 12;
  const auto scene = generate_scene_layout(sc);
  TrackerConfig cfg;
  cfg.seed = 3;
  const auto out = pf_tracker(simulate_observations(scene.truth, ObservationModel{deg2rad(2.0), 0.0, 0.0, 5}), cfg);
  const std::size_t n_segments = scene.speakers[0].segments.size();
  EXPECT_EQ(out.n_tracks(), n_segments);
  const auto r = evaluate_scene(out, scene.truth);
  ASSERT_TRUE(r.assoc);
  EXPECT_NEAR(r.assoc->ass_re, 1.0 / static_cast<double>(n_segments), 0.3 / static_cast<double>(n_segments));
  EXPECT_GT(r.assoc->ass_pr, 0.97);
}

TEST(PfTracker, HoldBridgesSingleMisses) {
  auto obs = clean_observations(30, {{kA, 0, 30}});
  obs.frames[10].clear();
  auto cfg = exact_config();
  EXPECT_FALSE(pf_tracker(obs, cfg).trajectory("t0").contains(10));
  cfg.hold_frames = 1;
  const auto held = pf_tracker(obs, cfg);
  EXPECT_TRUE(held.trajectory("t0").contains(10));
  EXPECT_LT(angular_distance(held.trajectory("t0").at(10), kA), 1e-6);
}

TEST(PfTracker, IdReusePolicies) {
  // t0 at A dies first, t1 at B dies later, then a new source appears at C.
  const auto obs = clean_observations(80, {{kA, 0, 10}, {kB, 0, 20}, {kC, 60, 80}});
  auto cfg = exact_config();
  cfg.k_max = 2;
  cfg.max_active = 2;
  cfg.id_reuse = IdReuse::kLongestDead;
  const auto longest = pf_tracker(obs, cfg);
  EXPECT_TRUE(longest.trajectory("t0").contains(70));
  cfg.id_reuse = IdReuse::kMostRecentlyDead;
  const auto recent = pf_tracker(obs, cfg);
  EXPECT_TRUE(recent.trajectory("t1").contains(70));
  EXPECT_EQ(recent.n_tracks(), 2u);
}

TEST(PfTracker, DisplacementShortensTheWaitForASlot) {
  // One slot; the source jumps from A to C with no gap.
  const auto obs = clean_observations(60, {{kA, 0, 20}, {kC, 20, 60}});
  auto cfg = exact_config();
  cfg.birth_frames = 3;
  cfg.death_frames = 10;
  cfg.max_active = 1;
  const auto waiting = pf_tracker(obs, cfg);
  EXPECT_EQ(waiting.trajectory("t1").begin()->first, 29u);
  cfg.displace_silent = true;
  const auto displaced = pf_tracker(obs, cfg);
  EXPECT_EQ(displaced.trajectory("t1").begin()->first, 22u);
}

// Capacity and id-budget invariants on random noisy scenes.
TEST(PfTracker, RespectsCapacityAndIdBudget) {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    ScenarioConfig sc;
    sc.n_speakers = 1 + seed % 3;
    sc.duration_s = 20.0;
    sc.seed = seed;
    const auto gt = generate_scene(sc);
    const auto obs = simulate_observations(gt, ObservationModel{deg2rad(3.0), 0.05, 0.5, seed});
    TrackerConfig cfg;
    cfg.max_active = 1 + seed % 2;
    cfg.k_max = cfg.max_active + seed % 3;
    cfg.seed = seed;
    const auto out = pf_tracker(obs, cfg);
    EXPECT_LE(out.n_tracks(), *cfg.k_max);
    for (const auto& frame : out.by_frame()) EXPECT_LE(frame.size(), cfg.max_active);
  }
}

TEST(PfTracker, DeterministicPerSeed) {
  ScenarioConfig sc;
  sc.n_speakers = 2;
  sc.seed = 9;
  const auto obs = simulate_observations(generate_scene(sc), ObservationModel{deg2rad(3.0), 0.02, 0.1, 9});
  TrackerConfig cfg;
  cfg.max_active = 2;
  cfg.seed = 1;
  EXPECT_EQ(pf_tracker(obs, cfg), pf_tracker(obs, cfg));
}

}  // namespace
}  // namespace idtrack
