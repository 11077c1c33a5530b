#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <utility>

#include "idtrack/matching.hpp"

namespace idtrack {

// A TP couple: (prediction id, ground-truth id).
using Couple = std::pair<TrackId, TrackId>;

struct CoupleCounts {
  std::size_t tpa = 0;  // TPs with exactly this couple
  std::size_t fpa = 0;  // TPs with same pred and other gt, plus FPs of the pred
  std::size_t fna = 0;  // TPs with same gt and other pred, plus FNs of the gt
  std::size_t multiplicity = 0;
};

// Association counts accumulated over a whole scene, one record per distinct couple.
struct AssociationCounts {
  std::map<Couple, CoupleCounts> couples;
  std::size_t n_tp = 0;
};

struct AssociationScores {
  double ass_re = 0.0;
  double ass_pr = 0.0;
  double ass_a = 0.0;
};

AssociationCounts count_associations(const MatchSequence& ms);

// All three throw UndefinedMetric when the scene has no TP.
double ass_re(const AssociationCounts& counts);
double ass_pr(const AssociationCounts& counts);
double ass_a(const AssociationCounts& counts);

// nullopt when the scene has no TP.
std::optional<AssociationScores> association_scores(const AssociationCounts& counts);

}  // namespace idtrack
