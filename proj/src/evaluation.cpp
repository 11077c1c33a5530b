#include "idtrack/evaluation.hpp"

#include "idtrack/errors.hpp"

namespace idtrack {

MetricsReport evaluate_scene(const TrackSet& preds, const TrackSet& gts, const EvalParams& params) {
  const MatchSequence ms = match_sequence(preds, gts, params.gate);
  MetricsReport r;
  r.frame = frame_metrics(ms, preds, gts, params.ospa);
  r.assoc = association_scores(count_associations(ms));
  return r;
}

const std::vector<std::string>& metric_columns() {
  static const std::vector<std::string> cols = {"n_tp", "n_fp",      "n_fn",      "tsr",
                                                "tfr",  "idsw",      "mota",      "ospa_mean",
                                                "mean_loc_error_deg", "ass_a", "ass_pr", "ass_re"};
  return cols;
}

const std::vector<std::string>& extra_metrics() {
  static const std::vector<std::string> cols = {"n_swaps", "n_broken", "tsr_per_track", "tfr_per_track"};
  return cols;
}

std::optional<double> metric_value(const MetricsReport& r, std::string_view name) {
  const auto& f = r.frame;
  auto count = [](std::size_t n) { return std::optional<double>(static_cast<double>(n)); };
  if (name == "n_tp") return count(f.n_tp);
  if (name == "n_fp") return count(f.n_fp);
  if (name == "n_fn") return count(f.n_fn);
  if (name == "n_swaps") return count(f.n_swaps);
  if (name == "n_broken") return count(f.n_broken);
  if (name == "idsw") return count(f.n_idsw);
  if (name == "tsr") return f.tsr;
  if (name == "tfr") return f.tfr;
  if (name == "tsr_per_track") return f.tsr_per_track;
  if (name == "tfr_per_track") return f.tfr_per_track;
  if (name == "mota") return f.mota;
  if (name == "ospa_mean") return rad2deg(f.ospa_mean);
  if (name == "mean_loc_error_deg") {
    if (!f.mean_loc_error) return std::nullopt;
    return rad2deg(*f.mean_loc_error);
  }
  if (name == "ass_a") return r.assoc ? std::optional<double>(r.assoc->ass_a) : std::nullopt;
  if (name == "ass_pr") return r.assoc ? std::optional<double>(r.assoc->ass_pr) : std::nullopt;
  if (name == "ass_re") return r.assoc ? std::optional<double>(r.assoc->ass_re) : std::nullopt;
  throw InvalidConfig("unknown metric '" + std::string(name) + "'");
}

}  // namespace idtrack
