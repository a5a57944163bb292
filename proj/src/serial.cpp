#include "wgsir/serial.hpp"

#include <cmath>

namespace wgsir::serial {

DistanceMatrix pairwise_matrix(const std::vector<EmpiricalMeasure>& measures, Metric metric,
                               const std::optional<SlicingSpec>& slicing)
{
    if (measures.size() < 2)
        throw Error("pairwise_matrix: need at least 2 measures");
    const std::size_t dim = common_dimension(measures);
    if (dim > 1 && metric == Metric::W2)
        throw Error("W2 is only implemented for univariate measures");
    if (dim > 1 && !slicing)
        throw Error("SW2 on multivariate measures requires a slicing spec");
    const std::size_t n = measures.size();
    DistanceMatrix out;
    out.metric = metric;
    out.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = i + 1; k < n; ++k) {
            const double d = dim == 1 ? w2_empirical_1d(measures[i], measures[k])
                                      : sw2_empirical(measures[i], measures[k], *slicing);
            out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = d;
            out.values(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = d;
        }
    }
    return out;
}

Eigen::MatrixXd multivariate_ranks(const Eigen::MatrixXd& u)
{
    const Eigen::Index n = u.rows();
    const Eigen::Index k = u.cols();
    Eigen::MatrixXd ranks = Eigen::MatrixXd::Zero(n, k);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index l = 0; l < n; ++l) {
            double norm2 = 0.0;
            for (Eigen::Index c = 0; c < k; ++c)
                norm2 += (u(l, c) - u(i, c)) * (u(l, c) - u(i, c));
            if (norm2 == 0.0)
                continue;
            const double norm = std::sqrt(norm2);
            for (Eigen::Index c = 0; c < k; ++c)
                ranks(i, c) += (u(l, c) - u(i, c)) / norm;
        }
    }
    return ranks / static_cast<double>(n);
}

MetricValue distance_correlation(const Eigen::MatrixXd& u, const Eigen::MatrixXd& v)
{
    const Eigen::Index n = u.rows();
    auto centered = [n](const Eigen::MatrixXd& x) {
        Eigen::MatrixXd a(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index k = 0; k < n; ++k)
                a(i, k) = (x.row(i) - x.row(k)).norm();
        Eigen::VectorXd rows = a.rowwise().mean();
        Eigen::VectorXd cols = a.colwise().mean().transpose();
        const double grand = a.mean();
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index k = 0; k < n; ++k)
                a(i, k) += grand - rows(i) - cols(k);
        return a;
    };
    const Eigen::MatrixXd a = centered(u);
    const Eigen::MatrixXd b = centered(v);
    const double nn = static_cast<double>(n * n);
    const double dcov = (a.array() * b.array()).sum() / nn;
    const double du = (a.array() * a.array()).sum() / nn;
    const double dv = (b.array() * b.array()).sum() / nn;
    if (!(du * dv > 0.0))
        return {0.0, true};
    return {std::sqrt(std::max(dcov, 0.0) / std::sqrt(du * dv)), false};
}

} // namespace wgsir::serial
