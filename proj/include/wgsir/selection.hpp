#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "wgsir/gsir.hpp"

namespace wgsir {

/// {1e-6, 1e-5, ..., 1e-1, 1}
inline constexpr std::array<double, 7> kDefaultEpsilonGrid = {1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0};

/// Generalized cross-validation score of ridge-predicting Ky from Kx, with
/// ridge eps * lambda_max(Kx). Uses uncentered kernel matrices.
double gcv(const Eigen::MatrixXd& kx, const Eigen::MatrixXd& ky, double eps);

struct EpsilonChoice
{
    double eps_x = 0.0;
    double eps_y = 0.0;
};

/// Grid argmin of gcv(kx, ky, .), scanning ascending so ties go to the smaller
/// value. Degenerate grid points are skipped; throws if all are degenerate.
double gcv_argmin(const Eigen::MatrixXd& kx, const Eigen::MatrixXd& ky, std::span<const double> grid);

/// Grid argmin of gcv(Kx, Ky, .) and gcv(Ky, Kx, .); ties go to the smaller value.
EpsilonChoice select_epsilon(const Eigen::MatrixXd& kx, const Eigen::MatrixXd& ky,
                             std::span<const double> grid = kDefaultEpsilonGrid);

struct OrderSelectionResult
{
    std::size_t d_hat = 0;
    /// G_n(k) for k = 0..k_max.
    std::vector<double> scores;
    double c0 = 2.0;
};

/// 2 for GSIR1, 4 for GSIR2.
double bic_penalty_constant(Variant variant);

/// BIC-type order: argmax over k of sum_{i<=k} lambda_i - c0 lambda_1 n^{-1/2} log(n) k.
OrderSelectionResult bic_order(const Eigen::VectorXd& eigenvalues, std::size_t n, double c0,
                               std::optional<std::size_t> k_max = std::nullopt);

} // namespace wgsir
