#include "idtrack/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "idtrack/errors.hpp"

namespace idtrack {

BootstrapResult bootstrap_aggregate(std::span<const double> values, double fraction, std::size_t replicates,
                                    Rng& rng) {
  const std::size_t n = values.size();
  if (n < 2) throw InsufficientData("bootstrap needs at least 2 defined values, got " + std::to_string(n));
  if (!(fraction > 0.0 && fraction <= 1.0)) throw InvalidConfig("bootstrap fraction must be in (0, 1]");

  if (replicates == 0)
    return {std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n), std::nullopt};

  const auto k = std::max<std::size_t>(
      1, std::min(n, static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9))));
  std::vector<double> means;
  means.reserve(replicates);
  std::vector<double> draw;
  draw.reserve(k);
  for (std::size_t r = 0; r < replicates; ++r) {
    draw.clear();
    std::sample(values.begin(), values.end(), std::back_inserter(draw), k, rng);
    means.push_back(std::accumulate(draw.begin(), draw.end(), 0.0) / static_cast<double>(k));
  }
  const double mean = std::accumulate(means.begin(), means.end(), 0.0) / static_cast<double>(replicates);
  double var = 0.0;
  for (double m : means) var += (m - mean) * (m - mean);
  const double std = replicates > 1 ? std::sqrt(var / static_cast<double>(replicates - 1)) : 0.0;
  return {mean, std};
}

MetricAggregate aggregate_metric(std::span<const std::optional<double>> values, double fraction,
                                 std::size_t replicates, Rng& rng) {
  std::vector<double> defined;
  for (const auto& v : values)
    if (v) defined.push_back(*v);
  MetricAggregate agg;
  agg.n_defined = defined.size();
  agg.n_excluded = values.size() - defined.size();
  if (defined.size() == 1) {
    agg.mean = defined.front();
  } else if (defined.size() >= 2) {
    const auto b = bootstrap_aggregate(defined, fraction, replicates, rng);
    agg.mean = b.mean;
    agg.std = b.std;
  }
  return agg;
}

}  // namespace idtrack
