#include "wgsir/kernels.hpp"

#include <cmath>

#include "wgsir/linalg.hpp"

namespace wgsir {

std::string to_string(KernelFamily family)
{
    return family == KernelFamily::Gaussian ? "gaussian" : "laplacian";
}

KernelFamily parse_kernel_family(const std::string& name)
{
    if (name == "gaussian")
        return KernelFamily::Gaussian;
    if (name == "laplacian")
        return KernelFamily::Laplacian;
    throw Error("unknown kernel family '" + name + "' (expected gaussian or laplacian)");
}

void KernelSpec::validate() const
{
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw Error("kernel: gamma must be positive and finite");
}

double default_gamma(const DistanceMatrix& d)
{
    const auto n = d.values.rows();
    if (n < 2 || d.values.cols() != n)
        throw Error("default_gamma: need a square distance matrix with n >= 2");
    double sum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index k = i + 1; k < n; ++k)
            sum += d.values(i, k) * d.values(i, k);
    }
    const double sigma2 = sum / (0.5 * static_cast<double>(n) * static_cast<double>(n - 1));
    if (!(sigma2 > 0.0))
        throw Error("default_gamma: degenerate distance matrix (all off-diagonal distances are zero)");
    return 1.0 / (2.0 * sigma2);
}

Eigen::MatrixXd kernel_values(const Eigen::MatrixXd& distances, const KernelSpec& spec)
{
    spec.validate();
    const double g = spec.gamma;
    Eigen::MatrixXd k(distances.rows(), distances.cols());
    const auto total = static_cast<std::ptrdiff_t>(distances.size());
    const double* src = distances.data();
    double* dst = k.data();
    if (spec.family == KernelFamily::Gaussian) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < total; ++i)
            dst[i] = std::exp(-g * src[i] * src[i]);
    } else {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < total; ++i)
            dst[i] = std::exp(-g * src[i]);
    }
    return k;
}

Eigen::MatrixXd center_gram(const Eigen::MatrixXd& k)
{
    if (k.rows() == 0 || k.rows() != k.cols())
        throw Error("center_gram: need a nonempty square matrix");
    const Eigen::VectorXd col_means = k.colwise().mean().transpose();
    const Eigen::VectorXd row_means = k.rowwise().mean();
    const double grand = k.mean();
    Eigen::MatrixXd g = k;
    g.colwise() -= row_means;
    g.rowwise() -= col_means.transpose();
    g.array() += grand;
    // Exact symmetry for symmetric input.
    return 0.5 * (g + g.transpose());
}

GramMatrix gram_matrix(const DistanceMatrix& d, const KernelSpec& spec)
{
    if (d.values.rows() != d.values.cols() || d.values.rows() == 0)
        throw Error("gram_matrix: distance matrix must be square and nonempty");
    GramMatrix out;
    out.spec = spec;
    out.K = kernel_values(d.values, spec);
    out.G = center_gram(out.K);
    const EigenResult eig = sym_eig(out.G);
    out.lambda_max = eig.values(0);
    const double smallest = eig.values(eig.values.size() - 1);
    if (smallest < -1e-8 * std::max(out.lambda_max, 1e-12))
        throw Error("gram_matrix: centered Gram matrix is not PSD (eigenvalue " + std::to_string(smallest) +
                    ", lambda_max " + std::to_string(out.lambda_max) + ")");
    return out;
}

} // namespace wgsir
