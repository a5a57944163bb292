#include "wgsir/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wgsir/error.hpp"

namespace wgsir {

namespace {

void check_sample(const Eigen::MatrixXd& u, const char* what)
{
    if (u.rows() < 2)
        throw Error(std::string(what) + ": need at least 2 observations");
    if (u.cols() < 1)
        throw Error(std::string(what) + ": need at least one column");
    if (!u.allFinite())
        throw Error(std::string(what) + ": non-finite entries");
}

void check_pair(const Eigen::MatrixXd& u, const Eigen::MatrixXd& v, const char* what)
{
    check_sample(u, what);
    check_sample(v, what);
    if (u.rows() != v.rows())
        throw Error(std::string(what) + ": samples have different sizes");
}

// tr(cov(a, b) cov(b, a)) up to the 1/n^2 factor, which cancels in the ratio.
double cross_trace(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b)
{
    const Eigen::MatrixXd c = a.transpose() * b;
    return c.squaredNorm();
}

// Euclidean distance matrix, double centered. Row sums are accumulated per
// row so results do not depend on the thread count.
Eigen::MatrixXd centered_distances(const Eigen::MatrixXd& u)
{
    const auto n = static_cast<std::ptrdiff_t>(u.rows());
    Eigen::MatrixXd a(n, n);
#pragma omp parallel for schedule(static)
    // Column-major storage: the parallel index walks columns.
    for (std::ptrdiff_t k = 0; k < n; ++k) {
        for (std::ptrdiff_t i = 0; i < n; ++i)
            a(i, k) = (u.row(i) - u.row(k)).norm();
    }
    Eigen::VectorXd row_mean(n);
    for (std::ptrdiff_t i = 0; i < n; ++i)
        row_mean(i) = a.row(i).sum() / static_cast<double>(n);
    double grand = 0.0;
    for (std::ptrdiff_t i = 0; i < n; ++i)
        grand += row_mean(i);
    grand /= static_cast<double>(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < n; ++k) {
        for (std::ptrdiff_t i = 0; i < n; ++i)
            a(i, k) = a(i, k) - row_mean(i) - row_mean(k) + grand;
    }
    return a;
}

double mean_product(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b)
{
    const auto n = a.rows();
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        double row = 0.0;
        for (Eigen::Index k = 0; k < n; ++k)
            row += a(i, k) * b(i, k);
        total += row;
    }
    return total / static_cast<double>(n * n);
}

} // namespace

Eigen::MatrixXd multivariate_ranks(const Eigen::MatrixXd& u)
{
    check_sample(u, "multivariate_ranks");
    const auto n = static_cast<std::ptrdiff_t>(u.rows());
    const auto k = u.cols();
    Eigen::MatrixXd ranks = Eigen::MatrixXd::Zero(n, k);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        // Scalar loops: a temporary row vector per pair would allocate n^2 times.
        for (std::ptrdiff_t l = 0; l < n; ++l) {
            double norm2 = 0.0;
            for (Eigen::Index c = 0; c < k; ++c)
                norm2 += (u(l, c) - u(i, c)) * (u(l, c) - u(i, c));
            if (norm2 == 0.0)
                continue;
            const double norm = std::sqrt(norm2);
            for (Eigen::Index c = 0; c < k; ++c)
                ranks(i, c) += (u(l, c) - u(i, c)) / norm;
        }
        ranks.row(i) /= static_cast<double>(n);
    }
    return ranks;
}

MetricValue rvmr(const Eigen::MatrixXd& u, const Eigen::MatrixXd& v)
{
    check_pair(u, v, "rvmr");
    Eigen::MatrixXd ru = multivariate_ranks(u);
    Eigen::MatrixXd rv = multivariate_ranks(v);
    ru.rowwise() -= ru.colwise().mean();
    rv.rowwise() -= rv.colwise().mean();

    const double var_u = cross_trace(ru, ru);
    const double var_v = cross_trace(rv, rv);
    const double denominator = std::sqrt(var_u * var_v);
    if (!(denominator > 0.0))
        return {0.0, true};
    // Averaging both orders makes the result exactly symmetric in (U, V).
    const double numerator = 0.5 * (cross_trace(ru, rv) + cross_trace(rv, ru));
    return {std::clamp(numerator / denominator, 0.0, 1.0), false};
}

MetricValue distance_correlation(const Eigen::MatrixXd& u, const Eigen::MatrixXd& v)
{
    check_pair(u, v, "distance_correlation");
    const Eigen::MatrixXd a = centered_distances(u);
    const Eigen::MatrixXd b = centered_distances(v);
    const double dvar_u = mean_product(a, a);
    const double dvar_v = mean_product(b, b);
    const double denominator = std::sqrt(dvar_u * dvar_v);
    if (!(denominator > 0.0))
        return {0.0, true};
    const double dcov2 = std::max(mean_product(a, b), 0.0);
    return {std::clamp(std::sqrt(dcov2 / denominator), 0.0, 1.0), false};
}

} // namespace wgsir
