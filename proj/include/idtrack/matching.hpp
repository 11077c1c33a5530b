#pragma once

#include <span>
#include <vector>

#include "idtrack/geometry.hpp"
#include "idtrack/trackmodel.hpp"

namespace idtrack {

inline constexpr double kDefaultMatchGate = deg2rad(20.0);

struct TruePositive {
  TrackId pred;
  TrackId gt;
  double error = 0.0;  // radians

  friend bool operator==(const TruePositive&, const TruePositive&) = default;
};

// Per-frame TP/FP/FN partition. Lists are sorted by id (tps by pred id).
struct FrameAssignment {
  std::vector<TruePositive> tps;
  std::vector<TrackId> fps;
  std::vector<TrackId> fns;

  friend bool operator==(const FrameAssignment&, const FrameAssignment&) = default;
};

struct MatchSequence {
  FrameGrid grid;
  std::vector<FrameAssignment> frames;

  std::size_t n_tp() const noexcept;
  std::size_t n_fp() const noexcept;
  std::size_t n_fn() const noexcept;
};

// One-to-one matching of predictions to ground truths where only pairs within
// `gate` may match. Maximises the number of matched pairs, then minimises the total
// angular error; remaining ties go to the lexicographically smallest (pred, gt) list.
// Ids must be unique within each list.
FrameAssignment match_frame(std::span<const TrackEntry> preds, std::span<const TrackEntry> gts, double gate);

// match_frame applied frame by frame. Throws GridMismatch if the grids differ.
MatchSequence match_sequence(const TrackSet& preds, const TrackSet& gts, double gate);

}  // namespace idtrack
