#include "wgsir/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wgsir/linalg.hpp"

namespace wgsir {

double gcv(const Eigen::MatrixXd& kx, const Eigen::MatrixXd& ky, double eps)
{
    const auto n = kx.rows();
    if (n == 0 || kx.cols() != n || ky.rows() != n || ky.cols() != n)
        throw Error("gcv: kernel matrices must be square with equal n");
    if (!(eps > 0.0) || !std::isfinite(eps))
        throw Error("gcv: eps must be positive and finite");
    const double eta = eps * max_eigenvalue(kx);
    if (!(eta > 0.0))
        throw Error("gcv: degenerate criterion (lambda_max(Kx) is not positive)");

    // S = Kx (Kx + eta I)^{-1}; (Kx + eta I)^{-1} commutes with Kx.
    const Eigen::MatrixXd smoother =
        kx * ridge_inverse_apply(kx, eta, Eigen::MatrixXd::Identity(n, n));
    const double numerator = (ky - smoother * ky).squaredNorm();
    const double trace = static_cast<double>(n) - smoother.trace();
    const double denominator = trace * trace;
    if (!(denominator > 0.0) || !std::isfinite(denominator))
        throw Error("gcv: degenerate criterion (trace term vanishes)");
    return numerator / denominator;
}

double gcv_argmin(const Eigen::MatrixXd& kx, const Eigen::MatrixXd& ky, std::span<const double> grid)
{
    if (grid.empty())
        throw Error("select_epsilon: empty grid");
    std::vector<double> sorted(grid.begin(), grid.end());
    std::sort(sorted.begin(), sorted.end());
    double best = std::numeric_limits<double>::infinity();
    double best_eps = 0.0;
    bool any = false;
    for (double eps : sorted) {
        double score;
        try {
            score = gcv(kx, ky, eps);
        } catch (const Error&) {
            continue;
        }
        if (!any || score < best) {
            best = score;
            best_eps = eps;
            any = true;
        }
    }
    if (!any)
        throw Error("select_epsilon: every grid point is degenerate");
    return best_eps;
}

EpsilonChoice select_epsilon(const Eigen::MatrixXd& kx, const Eigen::MatrixXd& ky, std::span<const double> grid)
{
    return {gcv_argmin(kx, ky, grid), gcv_argmin(ky, kx, grid)};
}

double bic_penalty_constant(Variant variant)
{
    return variant == Variant::Gsir1 ? 2.0 : 4.0;
}

OrderSelectionResult bic_order(const Eigen::VectorXd& eigenvalues, std::size_t n, double c0,
                               std::optional<std::size_t> k_max)
{
    if (n < 2)
        throw Error("bic_order: n must be at least 2");
    if (!eigenvalues.allFinite())
        throw Error("bic_order: non-finite eigenvalue");
    const auto count = static_cast<std::size_t>(eigenvalues.size());
    const std::size_t kmax = std::min(k_max.value_or(count), count);

    auto clamp = [](double v) { return (v < 0.0 && v >= -1e-8) ? 0.0 : v; };
    const double lambda1 = count > 0 ? clamp(eigenvalues(0)) : 0.0;
    if (lambda1 < 0.0)
        throw Error("bic_order: leading eigenvalue is negative (" + std::to_string(lambda1) + ")");

    const double nn = static_cast<double>(n);
    const double step = c0 * lambda1 * std::log(nn) / std::sqrt(nn);
    OrderSelectionResult out;
    out.c0 = c0;
    out.scores.assign(kmax + 1, 0.0);
    double cumulative = 0.0;
    double best = 0.0;
    for (std::size_t k = 1; k <= kmax; ++k) {
        cumulative += clamp(eigenvalues(static_cast<Eigen::Index>(k - 1)));
        out.scores[k] = cumulative - step * static_cast<double>(k);
        if (out.scores[k] > best) {
            best = out.scores[k];
            out.d_hat = k;
        }
    }
    return out;
}

} // namespace wgsir
