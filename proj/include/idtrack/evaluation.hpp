#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "idtrack/assoc_metrics.hpp"
#include "idtrack/frame_metrics.hpp"

namespace idtrack {

struct EvalParams {
  double gate = kDefaultMatchGate;
  OspaParams ospa;
};

// Every scalar metric for one scene. Association scores are absent when no TP exists.
struct MetricsReport {
  FrameMetricsReport frame;
  std::optional<AssociationScores> assoc;
};

MetricsReport evaluate_scene(const TrackSet& preds, const TrackSet& gts, const EvalParams& params = {});

// Column order of the per-scene metrics table (after scene_id).
const std::vector<std::string>& metric_columns();
// Additional metrics carried in aggregates only.
const std::vector<std::string>& extra_metrics();

// Value of a named metric in external units (angles in degrees); nullopt when undefined.
std::optional<double> metric_value(const MetricsReport& report, std::string_view name);

}  // namespace idtrack
