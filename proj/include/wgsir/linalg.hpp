#pragma once

#include <Eigen/Dense>

namespace wgsir {

/// Full symmetric spectrum, eigenvalues descending. Each eigenvector is
/// signed so that its largest-magnitude component is positive.
struct EigenResult
{
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
};

/// Eigendecomposition of (A + A^T) / 2.
EigenResult sym_eig(const Eigen::MatrixXd& a);

/// Solves (A + eta I) X = B for symmetric PSD A and eta > 0.
Eigen::MatrixXd ridge_inverse_apply(const Eigen::MatrixXd& a, double eta, const Eigen::MatrixXd& b);

/// Largest eigenvalue of (A + A^T) / 2.
double max_eigenvalue(const Eigen::MatrixXd& a);

} // namespace wgsir
