#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "idtrack/matching.hpp"

namespace idtrack {

struct OspaParams {
  double cutoff = deg2rad(30.0);  // radians
  double order = 1.0;
};

struct FrameMetricsReport {
  std::size_t n_tp = 0;
  std::size_t n_fp = 0;
  std::size_t n_fn = 0;
  std::size_t n_swaps = 0;
  std::size_t n_broken = 0;
  std::size_t n_idsw = 0;
  std::size_t n_gt_tracks = 0;
  double duration_s = 0.0;
  double tsr = 0.0;  // s^-1, per scene
  double tfr = 0.0;  // s^-1, per scene
  // Same rates divided by the number of ground-truth tracks.
  std::optional<double> tsr_per_track;
  std::optional<double> tfr_per_track;
  std::optional<double> mota;
  std::optional<double> mean_loc_error;  // radians
  double ospa_mean = 0.0;                // radians
};

// For each gt, number of times its matched prediction id differs from the one at
// its previous matched frame. The reference is carried across inactive and FN frames.
std::size_t count_swaps(const MatchSequence& ms);
// Identity switches share the swap definition.
std::size_t idsw(const MatchSequence& ms);

// Number of (gt, f) with gt matched at f, active at f+1 and unmatched at f+1.
std::size_t count_broken(const MatchSequence& ms, const TrackSet& gts);

double tsr(std::size_t n_swaps, double duration_s);
double tfr(std::size_t n_swaps, std::size_t n_broken, double duration_s);

// 1 - (FN + FP + IDSW) / GT detections. Throws UndefinedMetric without ground truth.
double mota(std::size_t n_fn, std::size_t n_fp, std::size_t n_idsw, std::size_t n_gt_detections);

// OSPA distance between two direction sets (0 when both are empty).
double ospa_frame(std::span<const Direction> preds, std::span<const Direction> gts, double cutoff, double order);

// Frame OSPA averaged over frames where at least one set is non-empty; 0 if none.
double ospa_mean(const TrackSet& preds, const TrackSet& gts, const OspaParams& params);

// Mean TP error in radians. Throws UndefinedMetric without TP.
double mean_localization_error(const MatchSequence& ms);

FrameMetricsReport frame_metrics(const MatchSequence& ms, const TrackSet& preds, const TrackSet& gts,
                                 const OspaParams& ospa = {});

}  // namespace idtrack
