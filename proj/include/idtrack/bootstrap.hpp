#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "idtrack/random.hpp"

namespace idtrack {

struct BootstrapResult {
  double mean = 0.0;
  std::optional<double> std;  // absent with zero replicates
};

// Repeated subsampling without replacement: each replicate averages ceil(fraction * n)
// values; returns the mean of replicate means and their standard deviation. With zero
// replicates returns the plain mean and no std. Throws InsufficientData for n < 2.
BootstrapResult bootstrap_aggregate(std::span<const double> values, double fraction, std::size_t replicates,
                                    Rng& rng);

struct MetricAggregate {
  std::optional<double> mean;
  std::optional<double> std;
  std::size_t n_defined = 0;
  std::size_t n_excluded = 0;  // undefined per-scene values
};

// Drops undefined values (counted in n_excluded), then bootstraps. A single defined
// value yields its value as mean with no std; none yields no mean.
MetricAggregate aggregate_metric(std::span<const std::optional<double>> values, double fraction,
                                 std::size_t replicates, Rng& rng);

}  // namespace idtrack
