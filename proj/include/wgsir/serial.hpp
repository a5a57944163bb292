#pragma once

// Straightforward single-threaded reference versions of the OpenMP kernels.
// They exist for testing and benchmarking; library code uses the parallel
// versions.

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "wgsir/measures.hpp"
#include "wgsir/metrics.hpp"
#include "wgsir/ot_distances.hpp"

namespace wgsir::serial {

/// Calls w2_empirical_1d / sw2_empirical once per unordered pair.
DistanceMatrix pairwise_matrix(const std::vector<EmpiricalMeasure>& measures, Metric metric,
                               const std::optional<SlicingSpec>& slicing = std::nullopt);

Eigen::MatrixXd multivariate_ranks(const Eigen::MatrixXd& u);

MetricValue distance_correlation(const Eigen::MatrixXd& u, const Eigen::MatrixXd& v);

} // namespace wgsir::serial
