#pragma once

#include <string>

#include <Eigen/Dense>

#include "wgsir/ot_distances.hpp"

namespace wgsir {

enum class KernelFamily { Gaussian, Laplacian };

std::string to_string(KernelFamily family);
KernelFamily parse_kernel_family(const std::string& name);

/// exp(-gamma d^2) (Gaussian) or exp(-gamma d) (Laplacian).
struct KernelSpec
{
    KernelFamily family = KernelFamily::Gaussian;
    double gamma = 1.0;

    void validate() const;
};

/// Kernel matrix K, its centered form G = QKQ, and the largest eigenvalue of G.
struct GramMatrix
{
    Eigen::MatrixXd K;
    Eigen::MatrixXd G;
    KernelSpec spec;
    double lambda_max = 0.0;

    std::size_t n() const noexcept { return static_cast<std::size_t>(K.rows()); }
};

/// gamma = 1 / (2 sigma^2) with sigma^2 the mean squared off-diagonal distance.
double default_gamma(const DistanceMatrix& d);

/// Elementwise kernel of a distance block of any shape.
Eigen::MatrixXd kernel_values(const Eigen::MatrixXd& distances, const KernelSpec& spec);

/// QKQ with Q = I - 11^T / n.
Eigen::MatrixXd center_gram(const Eigen::MatrixXd& k);

/// Builds K and G from a distance matrix. Throws if G has an eigenvalue
/// below -1e-8 * lambda_max.
GramMatrix gram_matrix(const DistanceMatrix& d, const KernelSpec& spec);

} // namespace wgsir
