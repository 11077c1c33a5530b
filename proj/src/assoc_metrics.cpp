#include "idtrack/assoc_metrics.hpp"

#include <map>
#include <numeric>
#include <unordered_map>

#include "idtrack/errors.hpp"

namespace idtrack {

AssociationCounts count_associations(const MatchSequence& ms) {
  std::map<Couple, std::size_t> tp_couple;
  std::unordered_map<TrackId, std::size_t> tp_pred, fp_pred, tp_gt, fn_gt;
  std::size_t n_tp = 0;
  for (const auto& frame : ms.frames) {
    for (const auto& tp : frame.tps) {
      ++tp_couple[{tp.pred, tp.gt}];
      ++tp_pred[tp.pred];
      ++tp_gt[tp.gt];
      ++n_tp;
    }
    for (const auto& p : frame.fps) ++fp_pred[p];
    for (const auto& g : frame.fns) ++fn_gt[g];
  }

  AssociationCounts out;
  out.n_tp = n_tp;
  for (const auto& [couple, tpa] : tp_couple) {
    const auto& [pred, gt] = couple;
    CoupleCounts c;
    c.tpa = tpa;
    c.multiplicity = tpa;
    c.fpa = (tp_pred[pred] - tpa) + (fp_pred.contains(pred) ? fp_pred.at(pred) : 0);
    c.fna = (tp_gt[gt] - tpa) + (fn_gt.contains(gt) ? fn_gt.at(gt) : 0);
    out.couples.emplace(couple, c);
  }
  return out;
}

namespace {

// Couples are grouped by their reduced score fraction num/den so that each group adds
// (multiplicity * num) / den from exact integers. Scenes whose couples share one ratio
// (the adversaries, perfect trackers) then get a correctly rounded result.
template <typename Score>
double average_over_tps(const AssociationCounts& counts, const char* name, Score score) {
  if (counts.n_tp == 0) throw UndefinedMetric(std::string(name) + " is undefined without true positives");
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> groups;
  for (const auto& [_, c] : counts.couples) {
    auto [num, den] = score(c);
    const auto g = std::gcd(num, den);
    groups[{num / g, den / g}] += c.multiplicity;
  }
  double sum = 0.0;
  for (const auto& [ratio, mult] : groups)
    sum += static_cast<double>(mult * ratio.first) / static_cast<double>(ratio.second);
  return sum / static_cast<double>(counts.n_tp);
}

}  // namespace

double ass_re(const AssociationCounts& counts) {
  return average_over_tps(counts, "AssRe", [](const CoupleCounts& c) { return std::pair{c.tpa, c.tpa + c.fna}; });
}

double ass_pr(const AssociationCounts& counts) {
  return average_over_tps(counts, "AssPr", [](const CoupleCounts& c) { return std::pair{c.tpa, c.tpa + c.fpa}; });
}

double ass_a(const AssociationCounts& counts) {
  return average_over_tps(counts, "AssA",
                          [](const CoupleCounts& c) { return std::pair{c.tpa, c.tpa + c.fna + c.fpa}; });
}

std::optional<AssociationScores> association_scores(const AssociationCounts& counts) {
  if (counts.n_tp == 0) return std::nullopt;
  return AssociationScores{ass_re(counts), ass_pr(counts), ass_a(counts)};
}

}  // namespace idtrack
