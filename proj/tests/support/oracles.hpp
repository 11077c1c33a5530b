#pragma once

// Brute-force reference implementations used only by tests. They follow the metric
// definitions literally and share no code with the library beyond the data types.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "idtrack/geometry.hpp"
#include "idtrack/matching.hpp"
#include "idtrack/random.hpp"
#include "idtrack/trackmodel.hpp"

namespace idtrack::oracle {

struct BruteMatch {
  std::size_t cardinality = 0;
  double cost = 0.0;
  std::vector<int> pred_to_gt;  // -1 when unmatched
};

// Every partial injective matching within the gate; keeps the largest, then the
// cheapest. Exponential, intended for <= 6 x 6 frames.
inline BruteMatch brute_force_match(const std::vector<TrackEntry>& preds, const std::vector<TrackEntry>& gts,
                                    double gate) {
  BruteMatch best;
  best.cost = std::numeric_limits<double>::infinity();
  std::vector<int> current(preds.size(), -1);
  std::vector<char> used(gts.size(), 0);
  auto recurse = [&](auto&& self, std::size_t i, std::size_t card, double cost) -> void {
    if (i == preds.size()) {
      if (card > best.cardinality || (card == best.cardinality && cost < best.cost - 1e-12)) {
        best.cardinality = card;
        best.cost = cost;
        best.pred_to_gt = current;
      }
      return;
    }
    current[i] = -1;
    self(self, i + 1, card, cost);
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (used[g]) continue;
      const double d = angular_distance(preds[i].direction, gts[g].direction);
      if (d > gate) continue;
      used[g] = 1;
      current[i] = static_cast<int>(g);
      self(self, i + 1, card + 1, cost + d);
      used[g] = 0;
      current[i] = -1;
    }
  };
  recurse(recurse, 0, 0, 0.0);
  return best;
}

struct NaiveScores {
  double ass_re = 0.0;
  double ass_pr = 0.0;
  double ass_a = 0.0;
};

// Per-TP double loop: for every TP (p, g) of every frame, TPA counts TPs of the
// same couple over the scene, FPA counts frames where p is output but not matched
// to g, FNA counts frames where g is active but not matched to p.
inline std::optional<NaiveScores> naive_association(const MatchSequence& ms, const TrackSet& preds,
                                                    const TrackSet& gts) {
  std::vector<std::pair<TrackId, TrackId>> all_tps;
  for (const auto& fa : ms.frames)
    for (const auto& tp : fa.tps) all_tps.emplace_back(tp.pred, tp.gt);
  if (all_tps.empty()) return std::nullopt;

  auto matched_to = [&](std::size_t f, const TrackId& p) -> std::optional<TrackId> {
    for (const auto& tp : ms.frames[f].tps)
      if (tp.pred == p) return tp.gt;
    return std::nullopt;
  };
  auto matched_from = [&](std::size_t f, const TrackId& g) -> std::optional<TrackId> {
    for (const auto& tp : ms.frames[f].tps)
      if (tp.gt == g) return tp.pred;
    return std::nullopt;
  };

  NaiveScores s;
  for (const auto& [p, g] : all_tps) {
    double tpa = 0, fpa = 0, fna = 0;
    for (std::size_t f = 0; f < ms.frames.size(); ++f) {
      const bool p_active = preds.has_track(p) && preds.trajectory(p).contains(f);
      const bool g_active = gts.has_track(g) && gts.trajectory(g).contains(f);
      const auto pg = matched_to(f, p);
      const auto gp = matched_from(f, g);
      if (pg && *pg == g) {
        tpa += 1;
        continue;
      }
      if (p_active) fpa += 1;
      if (g_active) fna += 1;
    }
    s.ass_re += tpa / (tpa + fna);
    s.ass_pr += tpa / (tpa + fpa);
    s.ass_a += tpa / (tpa + fna + fpa);
  }
  const double n = static_cast<double>(all_tps.size());
  s.ass_re /= n;
  s.ass_pr /= n;
  s.ass_a /= n;
  return s;
}

// Swap counter written directly from the glossary: for each gt, walk its matched
// frames in order and count changes of the matched prediction id.
inline std::size_t naive_swaps(const MatchSequence& ms) {
  std::map<TrackId, std::vector<TrackId>> history;
  for (const auto& fa : ms.frames)
    for (const auto& tp : fa.tps) history[tp.gt].push_back(tp.pred);
  std::size_t swaps = 0;
  for (const auto& [g, seq] : history)
    for (std::size_t i = 1; i < seq.size(); ++i)
      if (seq[i] != seq[i - 1]) ++swaps;
  return swaps;
}

inline std::size_t naive_broken(const MatchSequence& ms, const TrackSet& gts) {
  std::size_t broken = 0;
  for (const auto& g : gts.track_ids()) {
    const auto& traj = gts.trajectory(g);
    for (std::size_t f = 0; f + 1 < ms.frames.size(); ++f) {
      auto is_tp = [&](std::size_t k) {
        return std::any_of(ms.frames[k].tps.begin(), ms.frames[k].tps.end(),
                           [&](const TruePositive& tp) { return tp.gt == g; });
      };
      if (is_tp(f) && traj.contains(f + 1) && !is_tp(f + 1)) ++broken;
    }
  }
  return broken;
}

// Random small scene pair: gts on a few fixed positions, predictions that follow
// them with noise, random id relabelling, dropouts and clutter.
struct RandomScene {
  TrackSet gts;
  TrackSet preds;
};

inline RandomScene random_scene(Rng& rng, std::size_t max_tracks = 5, std::size_t max_frames = 200) {
  std::uniform_int_distribution<std::size_t> n_frames_dist(1, max_frames);
  std::uniform_int_distribution<std::size_t> n_tracks_dist(1, max_tracks);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const FrameGrid grid{0.1, n_frames_dist(rng)};
  RandomScene scene{TrackSet(grid), TrackSet(grid)};

  const std::size_t n_gt = n_tracks_dist(rng);
  const std::size_t n_pred_ids = n_tracks_dist(rng);
  std::vector<Direction> anchors;
  for (std::size_t g = 0; g < n_gt; ++g) anchors.push_back(sample_direction(rng));
  const double p_active = 0.3 + 0.7 * u01(rng);
  const double p_relabel = 0.2 * u01(rng);
  std::vector<std::size_t> label(n_gt);
  for (std::size_t g = 0; g < n_gt; ++g) label[g] = g % n_pred_ids;
  std::uniform_int_distribution<std::size_t> pick_id(0, n_pred_ids - 1);

  for (std::size_t f = 0; f < grid.n_frames; ++f) {
    std::set<std::size_t> used_ids;
    for (std::size_t g = 0; g < n_gt; ++g) {
      if (u01(rng) > p_active) continue;
      scene.gts.add("g" + std::to_string(g), f, anchors[g]);
      if (u01(rng) < p_relabel) label[g] = pick_id(rng);
      if (u01(rng) < 0.15 || used_ids.contains(label[g])) continue;
      used_ids.insert(label[g]);
      const Eigen::Vector3d noisy = perturb(anchors[g].unit_vector(), deg2rad(8.0), rng);
      scene.preds.add("p" + std::to_string(label[g]), f, Direction::from_unit_vector(noisy));
    }
    for (std::size_t p = 0; p < n_pred_ids; ++p) {
      if (used_ids.contains(p) || u01(rng) > 0.05) continue;
      scene.preds.add("p" + std::to_string(p), f, sample_direction(rng));
    }
  }
  return scene;
}

}  // namespace idtrack::oracle
