#include "idtrack/matching.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "idtrack/assignment.hpp"
#include "idtrack/errors.hpp"

namespace idtrack {

std::size_t MatchSequence::n_tp() const noexcept {
  std::size_t n = 0;
  for (const auto& f : frames) n += f.tps.size();
  return n;
}

std::size_t MatchSequence::n_fp() const noexcept {
  std::size_t n = 0;
  for (const auto& f : frames) n += f.fps.size();
  return n;
}

std::size_t MatchSequence::n_fn() const noexcept {
  std::size_t n = 0;
  for (const auto& f : frames) n += f.fns.size();
  return n;
}

namespace {

constexpr int kFree = -2;
constexpr int kUnmatched = -1;

struct GatedProblem {
  Eigen::MatrixXd dist;
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> in_gate;
  double big = 0.0;     // cost of an out-of-gate pair
  double forbid = 0.0;  // cost of violating a fixed row/column

  struct Result {
    std::vector<int> rows;  // column per row, or kUnmatched
    std::size_t cardinality = 0;
    double cost = 0.0;
  };

  // fixed[i] == kFree: unconstrained; kUnmatched: row may not form a TP; j >= 0: row
  // must match column j.
  Result solve(const std::vector<int>& fixed) const {
    const auto n = dist.rows();
    const auto m = dist.cols();
    Eigen::MatrixXd cost(n, m);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < m; ++j) cost(i, j) = in_gate(i, j) ? dist(i, j) : big;
    for (Eigen::Index i = 0; i < n; ++i) {
      const int f = fixed[static_cast<std::size_t>(i)];
      if (f == kUnmatched) {
        cost.row(i).setConstant(big);
      } else if (f >= 0) {
        for (Eigen::Index j = 0; j < m; ++j)
          if (j != f) cost(i, j) = forbid;
        for (Eigen::Index k = 0; k < n; ++k)
          if (k != i) cost(k, f) = forbid;
      }
    }
    const auto assignment = solve_assignment(cost);
    Result r;
    r.rows.assign(static_cast<std::size_t>(n), kUnmatched);
    for (Eigen::Index i = 0; i < n; ++i) {
      const int j = assignment[static_cast<std::size_t>(i)];
      if (j < 0 || !in_gate(i, j) || cost(i, j) >= big) continue;
      r.rows[static_cast<std::size_t>(i)] = j;
      ++r.cardinality;
      r.cost += dist(i, j);
    }
    return r;
  }
};

bool same_objective(const GatedProblem::Result& a, const GatedProblem::Result& b) {
  return a.cardinality == b.cardinality && a.cost <= b.cost + 1e-9;
}

std::vector<TrackEntry> sorted_by_id(std::span<const TrackEntry> entries) {
  std::vector<TrackEntry> v(entries.begin(), entries.end());
  std::sort(v.begin(), v.end(), [](const TrackEntry& a, const TrackEntry& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i].id == v[i - 1].id) throw DuplicateEntry("duplicate id '" + v[i].id + "' in frame");
  return v;
}

}  // namespace

FrameAssignment match_frame(std::span<const TrackEntry> preds_in, std::span<const TrackEntry> gts_in, double gate) {
  if (!(gate > 0.0 && gate <= kPi)) throw InvalidConfig("matching gate must be in (0, pi]");
  const auto preds = sorted_by_id(preds_in);
  const auto gts = sorted_by_id(gts_in);
  const auto n = static_cast<Eigen::Index>(preds.size());
  const auto m = static_cast<Eigen::Index>(gts.size());

  FrameAssignment out;
  if (n == 0 || m == 0) {
    for (const auto& p : preds) out.fps.push_back(p.id);
    for (const auto& g : gts) out.fns.push_back(g.id);
    return out;
  }

  GatedProblem prob;
  prob.dist.resize(n, m);
  prob.in_gate.resize(n, m);
  bool any_in_gate = false;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto pv = preds[static_cast<std::size_t>(i)].direction.unit_vector();
    for (Eigen::Index j = 0; j < m; ++j) {
      const double d = angular_distance(pv, gts[static_cast<std::size_t>(j)].direction.unit_vector());
      prob.dist(i, j) = d;
      prob.in_gate(i, j) = d <= gate;
      any_in_gate = any_in_gate || d <= gate;
    }
  }

  std::vector<int> rows(static_cast<std::size_t>(n), kUnmatched);
  if (any_in_gate) {
    // Any in-gate pair costs less than one unit of `big`, so the optimum first
    // maximises the number of in-gate pairs.
    prob.big = static_cast<double>(std::min(n, m)) * kPi + 1.0;
    prob.forbid = prob.big * static_cast<double>(n + m + 1) * 4.0;

    std::vector<int> fixed(static_cast<std::size_t>(n), kFree);
    auto best = prob.solve(fixed);
    // Lexicographic refinement: walk predictions in id order and pin each to the
    // smallest gt id that keeps the objective optimal.
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto si = static_cast<std::size_t>(i);
      const int current = best.rows[si];
      const Eigen::Index limit = current == kUnmatched ? m : current;
      bool pinned = false;
      for (Eigen::Index j = 0; j < limit && !pinned; ++j) {
        if (!prob.in_gate(i, j)) continue;
        const bool taken = std::find(fixed.begin(), fixed.end(), static_cast<int>(j)) != fixed.end();
        if (taken) continue;
        auto trial_fixed = fixed;
        trial_fixed[si] = static_cast<int>(j);
        auto trial = prob.solve(trial_fixed);
        if (trial.rows[si] == static_cast<int>(j) && same_objective(trial, best)) {
          best = std::move(trial);
          fixed = std::move(trial_fixed);
          pinned = true;
        }
      }
      if (!pinned) fixed[si] = current;
    }
    rows = best.rows;
  }

  std::vector<char> gt_used(static_cast<std::size_t>(m), 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int j = rows[static_cast<std::size_t>(i)];
    if (j >= 0) {
      out.tps.push_back({preds[static_cast<std::size_t>(i)].id, gts[static_cast<std::size_t>(j)].id, prob.dist(i, j)});
      gt_used[static_cast<std::size_t>(j)] = 1;
    } else {
      out.fps.push_back(preds[static_cast<std::size_t>(i)].id);
    }
  }
  for (Eigen::Index j = 0; j < m; ++j)
    if (!gt_used[static_cast<std::size_t>(j)]) out.fns.push_back(gts[static_cast<std::size_t>(j)].id);
  return out;
}

MatchSequence match_sequence(const TrackSet& preds, const TrackSet& gts, double gate) {
  if (!preds.grid().compatible_with(gts.grid()))
    throw GridMismatch("prediction grid (" + std::to_string(preds.grid().n_frames) + " frames, " +
                       std::to_string(preds.grid().frame_period) + " s) differs from ground truth grid (" +
                       std::to_string(gts.grid().n_frames) + " frames, " + std::to_string(gts.grid().frame_period) +
                       " s)");
  const auto pf = preds.by_frame();
  const auto gf = gts.by_frame();
  MatchSequence ms{gts.grid(), {}};
  ms.frames.reserve(gf.size());
  for (std::size_t f = 0; f < gf.size(); ++f) ms.frames.push_back(match_frame(pf[f], gf[f], gate));
  return ms;
}

}  // namespace idtrack
