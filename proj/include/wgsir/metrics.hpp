#pragma once

#include <Eigen/Dense>

namespace wgsir {

/// A metric value plus whether it was defined by convention because a
/// variance term vanished.
struct MetricValue
{
    double value = 0.0;
    bool degenerate = false;
};

/// Row i = n^{-1} sum_l (U_l - U_i) / |U_l - U_i|, zero-length terms skipped.
Eigen::MatrixXd multivariate_ranks(const Eigen::MatrixXd& u);

/// RV coefficient between the multivariate ranks of U and V (rows are
/// observations; column counts may differ).
MetricValue rvmr(const Eigen::MatrixXd& u, const Eigen::MatrixXd& v);

/// Sample distance correlation from double-centered Euclidean distance matrices.
MetricValue distance_correlation(const Eigen::MatrixXd& u, const Eigen::MatrixXd& v);

} // namespace wgsir
