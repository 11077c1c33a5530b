#include "idtrack/frame_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "idtrack/assignment.hpp"
#include "idtrack/errors.hpp"

namespace idtrack {

std::size_t count_swaps(const MatchSequence& ms) {
  std::unordered_map<TrackId, TrackId> last_pred;
  std::size_t swaps = 0;
  for (const auto& frame : ms.frames) {
    for (const auto& tp : frame.tps) {
      auto it = last_pred.find(tp.gt);
      if (it == last_pred.end()) {
        last_pred.emplace(tp.gt, tp.pred);
      } else if (it->second != tp.pred) {
        ++swaps;
        it->second = tp.pred;
      }
    }
  }
  return swaps;
}

std::size_t idsw(const MatchSequence& ms) { return count_swaps(ms); }

std::size_t count_broken(const MatchSequence& ms, const TrackSet& gts) {
  if (!ms.grid.compatible_with(gts.grid())) throw GridMismatch("match sequence and ground truth grids differ");
  std::size_t broken = 0;
  for (std::size_t f = 0; f + 1 < ms.frames.size(); ++f) {
    for (const auto& tp : ms.frames[f].tps) {
      const auto& traj = gts.trajectory(tp.gt);
      if (!traj.contains(f + 1)) continue;
      const auto& next = ms.frames[f + 1];
      const bool matched_next =
          std::any_of(next.tps.begin(), next.tps.end(), [&](const TruePositive& t) { return t.gt == tp.gt; });
      if (!matched_next) ++broken;
    }
  }
  return broken;
}

double tsr(std::size_t n_swaps, double duration_s) {
  if (!(duration_s > 0.0)) throw InvalidConfig("duration must be positive");
  return static_cast<double>(n_swaps) / duration_s;
}

double tfr(std::size_t n_swaps, std::size_t n_broken, double duration_s) {
  if (!(duration_s > 0.0)) throw InvalidConfig("duration must be positive");
  return static_cast<double>(n_swaps + n_broken) / duration_s;
}

double mota(std::size_t n_fn, std::size_t n_fp, std::size_t n_idsw, std::size_t n_gt_detections) {
  if (n_gt_detections == 0) throw UndefinedMetric("MOTA is undefined without ground-truth detections");
  return 1.0 - static_cast<double>(n_fn + n_fp + n_idsw) / static_cast<double>(n_gt_detections);
}

double ospa_frame(std::span<const Direction> preds, std::span<const Direction> gts, double cutoff, double order) {
  if (!(cutoff > 0.0 && cutoff <= kPi)) throw InvalidConfig("OSPA cutoff must be in (0, pi]");
  if (!(order >= 1.0)) throw InvalidConfig("OSPA order must be >= 1");
  const std::size_t n = std::max(preds.size(), gts.size());
  const std::size_t m = std::min(preds.size(), gts.size());
  if (n == 0) return 0.0;

  double matched = 0.0;
  if (m > 0) {
    Eigen::MatrixXd cost(static_cast<Eigen::Index>(preds.size()), static_cast<Eigen::Index>(gts.size()));
    for (std::size_t i = 0; i < preds.size(); ++i) {
      const auto pv = preds[i].unit_vector();
      for (std::size_t j = 0; j < gts.size(); ++j)
        cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            std::pow(std::min(angular_distance(pv, gts[j].unit_vector()), cutoff), order);
    }
    matched = assignment_cost(cost, solve_assignment(cost));
  }
  const double total = matched + std::pow(cutoff, order) * static_cast<double>(n - m);
  return std::min(std::pow(total / static_cast<double>(n), 1.0 / order), cutoff);
}

double ospa_mean(const TrackSet& preds, const TrackSet& gts, const OspaParams& params) {
  if (!preds.grid().compatible_with(gts.grid())) throw GridMismatch("prediction and ground truth grids differ");
  const auto pf = preds.by_frame();
  const auto gf = gts.by_frame();
  double sum = 0.0;
  std::size_t counted = 0;
  std::vector<Direction> pd, gd;
  for (std::size_t f = 0; f < gf.size(); ++f) {
    if (pf[f].empty() && gf[f].empty()) continue;
    pd.clear();
    gd.clear();
    for (const auto& e : pf[f]) pd.push_back(e.direction);
    for (const auto& e : gf[f]) gd.push_back(e.direction);
    sum += ospa_frame(pd, gd, params.cutoff, params.order);
    ++counted;
  }
  return counted == 0 ? 0.0 : sum / static_cast<double>(counted);
}

double mean_localization_error(const MatchSequence& ms) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& frame : ms.frames)
    for (const auto& tp : frame.tps) {
      sum += tp.error;
      ++n;
    }
  if (n == 0) throw UndefinedMetric("localization error is undefined without true positives");
  return sum / static_cast<double>(n);
}

FrameMetricsReport frame_metrics(const MatchSequence& ms, const TrackSet& preds, const TrackSet& gts,
                                 const OspaParams& ospa) {
  FrameMetricsReport r;
  r.n_tp = ms.n_tp();
  r.n_fp = ms.n_fp();
  r.n_fn = ms.n_fn();
  r.n_swaps = count_swaps(ms);
  r.n_idsw = r.n_swaps;
  r.n_broken = count_broken(ms, gts);
  r.n_gt_tracks = gts.n_tracks();
  r.duration_s = gts.grid().duration();
  r.tsr = tsr(r.n_swaps, r.duration_s);
  r.tfr = tfr(r.n_swaps, r.n_broken, r.duration_s);
  if (r.n_gt_tracks > 0) {
    r.tsr_per_track = r.tsr / static_cast<double>(r.n_gt_tracks);
    r.tfr_per_track = r.tfr / static_cast<double>(r.n_gt_tracks);
  }
  const std::size_t n_gt = gts.n_entries();
  if (n_gt > 0) r.mota = mota(r.n_fn, r.n_fp, r.n_idsw, n_gt);
  if (r.n_tp > 0) r.mean_loc_error = mean_localization_error(ms);
  r.ospa_mean = ospa_mean(preds, gts, ospa);
  return r;
}

}  // namespace idtrack
