#include <cmath>

#include <gtest/gtest.h>

#include "idtrack/errors.hpp"
#include "idtrack/evaluation.hpp"
#include "idtrack/frame_metrics.hpp"
#include "idtrack/matching.hpp"
#include "idtrack/random.hpp"
#include "idtrack/trackers.hpp"
#include "support/oracles.hpp"

namespace idtrack {
namespace {

const Direction kHere = Direction::from_degrees(0, 0);
const Direction kFar = Direction::from_degrees(120, 0);

// g active on frames 0-4 of a 10 s grid: a at 0, nothing at 1, b at 2-3, b far at 4.
struct SwapScene {
  FrameGrid grid{0.1, 100};
  TrackSet gts{grid};
  TrackSet preds{grid};
  SwapScene() {
    for (std::size_t f = 0; f < 5; ++f) gts.add("g", f, kHere);
    preds.add("a", 0, kHere);
    preds.add("b", 2, kHere);
    preds.add("b", 3, kHere);
    preds.add("b", 4, kFar);
  }
};

TEST(FrameCounters, SwapCarriedAcrossFn) {
  const SwapScene s;
  const auto ms = match_sequence(s.preds, s.gts, kDefaultMatchGate);
  EXPECT_EQ(count_swaps(ms), 1u);
  EXPECT_EQ(idsw(ms), 1u);
  // TP at 0 -> FN at 1, and TP at 3 -> FN at 4.
  EXPECT_EQ(count_broken(ms, s.gts), 2u);
  EXPECT_DOUBLE_EQ(tsr(count_swaps(ms), s.grid.duration()), 0.1);
  EXPECT_DOUBLE_EQ(tfr(count_swaps(ms), count_broken(ms, s.gts), s.grid.duration()), 0.3);
}

TEST(FrameCounters, EndOfActivityIsNotBroken) {
  TrackSet gts(FrameGrid{0.1, 6}), preds(FrameGrid{0.1, 6});
  for (std::size_t f = 0; f < 3; ++f) {
    gts.add("g", f, kHere);
    preds.add("p", f, kHere);
  }
  gts.add("g", 5, kHere);
  const auto ms = match_sequence(preds, gts, kDefaultMatchGate);
  EXPECT_EQ(count_broken(ms, gts), 0u);
  EXPECT_EQ(count_swaps(ms), 0u);
}

TEST(FrameCounters, AgreeWithNaiveCounters) {
  Rng rng(31);
  for (int rep = 0; rep < 100; ++rep) {
    const auto scene = oracle::random_scene(rng);
    const auto ms = match_sequence(scene.preds, scene.gts, kDefaultMatchGate);
    EXPECT_EQ(count_swaps(ms), oracle::naive_swaps(ms));
    EXPECT_EQ(count_broken(ms, scene.gts), oracle::naive_broken(ms, scene.gts));
  }
}

TEST(Rates, OneSwapOverTenSeconds) {
  EXPECT_DOUBLE_EQ(tsr(1, 10.0), 0.1);
  EXPECT_DOUBLE_EQ(tfr(1, 2, 10.0), 0.3);
  EXPECT_THROW(tsr(1, 0.0), InvalidConfig);
}

TEST(Mota, WorkedValues) {
  EXPECT_DOUBLE_EQ(mota(2, 1, 1, 10), 0.6);
  EXPECT_DOUBLE_EQ(mota(0, 0, 0, 7), 1.0);
  EXPECT_DOUBLE_EQ(mota(5, 10, 0, 5), -2.0);
  EXPECT_THROW(mota(0, 0, 0, 0), UndefinedMetric);
}

TEST(Ospa, WorkedValues) {
  const double c = deg2rad(30);
  const std::vector<Direction> one{kHere};
  const std::vector<Direction> ten{Direction::from_degrees(10, 0)};
  const std::vector<Direction> ten_ninety{Direction::from_degrees(10, 0), Direction::from_degrees(90, 0)};
  EXPECT_EQ(ospa_frame({}, {}, c, 1.0), 0.0);
  EXPECT_NEAR(ospa_frame(one, ten, c, 1.0), deg2rad(10), 1e-12);
  EXPECT_NEAR(ospa_frame(one, {}, c, 1.0), c, 1e-15);
  // One matched pair at 10 deg plus one cardinality penalty at the cutoff.
  EXPECT_NEAR(ospa_frame(one, ten_ninety, c, 1.0), deg2rad(20), 1e-12);
  EXPECT_NEAR(ospa_frame(one, ten_ninety, c, 2.0), deg2rad(std::sqrt(500.0)), 1e-12);
  // Symmetric in its arguments.
  EXPECT_NEAR(ospa_frame(ten_ninety, one, c, 2.0), ospa_frame(one, ten_ninety, c, 2.0), 1e-15);
  EXPECT_THROW(ospa_frame(one, one, 0.0, 1.0), InvalidConfig);
  EXPECT_THROW(ospa_frame(one, one, c, 0.5), InvalidConfig);
}

TEST(Ospa, BoundedByCutoff) {
  Rng rng(12);
  const double c = deg2rad(30);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<Direction> a, b;
    for (int i = 0; i < rep % 5; ++i) a.push_back(sample_direction(rng));
    for (int i = 0; i < rep % 4; ++i) b.push_back(sample_direction(rng));
    const double d = ospa_frame(a, b, c, 1.0 + (rep % 3));
    EXPECT_GE(d, 0.0);
    EXPECT_LE(d, c + 1e-15);
  }
}

TEST(Ospa, MeanSkipsEmptyFrames) {
  TrackSet gts(FrameGrid{0.1, 4}), preds(FrameGrid{0.1, 4});
  gts.add("g", 0, kHere);
  preds.add("p", 0, Direction::from_degrees(10, 0));
  gts.add("g", 2, kHere);
  EXPECT_NEAR(ospa_mean(preds, gts, {}), deg2rad(20), 1e-12);
  EXPECT_EQ(ospa_mean(TrackSet(FrameGrid{0.1, 4}), TrackSet(FrameGrid{0.1, 4}), {}), 0.0);
}

TEST(FrameMetrics, ReportCombinesCounters) {
  const SwapScene s;
  const auto ms = match_sequence(s.preds, s.gts, kDefaultMatchGate);
  const auto r = frame_metrics(ms, s.preds, s.gts);
  EXPECT_EQ(r.n_tp, 3u);
  EXPECT_EQ(r.n_fp, 1u);
  EXPECT_EQ(r.n_fn, 2u);
  EXPECT_EQ(r.n_swaps, 1u);
  EXPECT_EQ(r.n_broken, 2u);
  ASSERT_TRUE(r.mota);
  EXPECT_DOUBLE_EQ(*r.mota, 1.0 - 4.0 / 5.0);
  ASSERT_TRUE(r.mean_loc_error);
  EXPECT_EQ(*r.mean_loc_error, 0.0);
  EXPECT_LE(r.tsr, r.tfr);
}

TEST(FrameMetrics, TfrEqualsTsrWithoutFn) {
  TrackSet gts(FrameGrid{0.1, 100});
  for (std::size_t f = 0; f < 100; ++f) {
    gts.add("g0", f, kHere);
    gts.add("g1", f, kFar);
  }
  const auto preds = swapper_tracker(gts, 1.0);
  const auto r = evaluate_scene(preds, gts);
  EXPECT_EQ(r.frame.n_fn, 0u);
  EXPECT_GT(r.frame.tsr, 0.0);
  EXPECT_EQ(r.frame.tsr, r.frame.tfr);
}

TEST(Evaluation, MetricValueUnitsAndUndefined) {
  TrackSet gts(FrameGrid{0.1, 3}), preds(FrameGrid{0.1, 3});
  gts.add("g", 0, kHere);
  preds.add("p", 0, Direction::from_degrees(4, 0));
  const auto r = evaluate_scene(preds, gts);
  EXPECT_NEAR(*metric_value(r, "mean_loc_error_deg"), 4.0, 1e-9);
  EXPECT_NEAR(*metric_value(r, "ospa_mean"), 4.0, 1e-9);
  EXPECT_EQ(*metric_value(r, "ass_a"), 1.0);

  const auto empty = evaluate_scene(TrackSet(gts.grid()), gts);
  EXPECT_FALSE(metric_value(empty, "ass_re").has_value());
  EXPECT_FALSE(metric_value(empty, "mean_loc_error_deg").has_value());
  for (const auto& name : metric_columns()) EXPECT_NO_THROW(metric_value(r, name));
}

}  // namespace
}  // namespace idtrack
