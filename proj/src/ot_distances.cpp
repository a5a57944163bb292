#include "wgsir/ot_distances.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <boost/math/special_functions/gamma.hpp>

#include "wgsir/linalg.hpp"
#include "wgsir/random.hpp"

namespace wgsir {

std::string to_string(Metric metric)
{
    return metric == Metric::W2 ? "W2" : "SW2";
}

Metric parse_metric(const std::string& name)
{
    if (name == "w2" || name == "W2")
        return Metric::W2;
    if (name == "sw2" || name == "SW2")
        return Metric::SW2;
    throw Error("unknown metric '" + name + "' (expected w2 or sw2)");
}

void SlicingSpec::validate() const
{
    if (L < 1)
        throw Error("slicing: L must be at least 1");
    if (dim < 1)
        throw Error("slicing: dimension must be at least 1");
}

Eigen::MatrixXd SlicingSpec::directions() const
{
    validate();
    Rng rng(seed);
    Eigen::MatrixXd theta(dim, L);
    for (std::size_t l = 0; l < L; ++l) {
        double norm = 0.0;
        do {
            for (std::size_t c = 0; c < dim; ++c)
                theta(c, l) = rng.normal();
            norm = theta.col(l).norm();
        } while (norm < 1e-12);
        theta.col(l) /= norm;
    }
    return theta;
}

double w2_squared_sorted(std::span<const double> x, std::span<const double> y)
{
    const std::size_t p = x.size();
    const std::size_t q = y.size();
    double acc = 0.0;
    if (p == q) {
        for (std::size_t j = 0; j < p; ++j) {
            const double d = x[j] - y[j];
            acc += d * d;
        }
        return acc / static_cast<double>(p);
    }
    // Left-continuous empirical quantile at s = (2j-1)/(2N): x[ceil(s*p) - 1].
    constexpr std::size_t N = kQuantileGridSize;
    for (std::size_t j = 1; j <= N; ++j) {
        const std::size_t ix = ((2 * j - 1) * p + 2 * N - 1) / (2 * N) - 1;
        const std::size_t iy = ((2 * j - 1) * q + 2 * N - 1) / (2 * N) - 1;
        const double d = x[ix] - y[iy];
        acc += d * d;
    }
    return acc / static_cast<double>(N);
}

double profile_distance(const SortedProfile& a, const SortedProfile& b)
{
    double acc = 0.0;
    for (std::size_t l = 0; l < a.slices; ++l)
        acc += w2_squared_sorted(a.slice(l), b.slice(l));
    return std::sqrt(acc / static_cast<double>(a.slices));
}

namespace {

SortedProfile univariate_profile(const EmpiricalMeasure& mu)
{
    SortedProfile p;
    p.slices = 1;
    p.m = mu.size();
    const auto s = mu.sorted();
    p.data.assign(s.begin(), s.end());
    return p;
}

SortedProfile sliced_profile(const EmpiricalMeasure& mu, const Eigen::MatrixXd& theta)
{
    SortedProfile p;
    p.slices = static_cast<std::size_t>(theta.cols());
    p.m = mu.size();
    p.data.resize(p.slices * p.m);
    const std::size_t r = mu.dim();
    for (std::size_t l = 0; l < p.slices; ++l) {
        double* out = p.data.data() + l * p.m;
        for (std::size_t j = 0; j < p.m; ++j) {
            double dot = 0.0;
            for (std::size_t c = 0; c < r; ++c)
                dot += theta(c, l) * mu.at(j, c);
            out[j] = dot;
        }
        std::sort(out, out + p.m);
    }
    return p;
}

void check_slicing(const std::optional<SlicingSpec>& slicing, std::size_t dim)
{
    if (!slicing)
        throw Error("SW2 on " + std::to_string(dim) + "-dimensional measures requires a slicing spec");
    slicing->validate();
    if (slicing->dim != dim)
        throw Error("slicing dimension " + std::to_string(slicing->dim) + " does not match measure dimension " +
                    std::to_string(dim));
}

} // namespace

std::vector<SortedProfile> sorted_profiles(const std::vector<EmpiricalMeasure>& measures, Metric metric,
                                           const std::optional<SlicingSpec>& slicing)
{
    if (measures.empty())
        return {};
    const std::size_t dim = common_dimension(measures);
    std::vector<SortedProfile> out(measures.size());
    if (dim == 1) {
        for (std::size_t i = 0; i < measures.size(); ++i)
            out[i] = univariate_profile(measures[i]);
        return out;
    }
    if (metric == Metric::W2)
        throw Error("W2 is only implemented for univariate measures (got dimension " + std::to_string(dim) +
                    "); use SW2");
    check_slicing(slicing, dim);
    const Eigen::MatrixXd theta = slicing->directions();
    const auto count = static_cast<std::ptrdiff_t>(measures.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i)
        out[i] = sliced_profile(measures[i], theta);
    return out;
}

double w2_empirical_1d(const EmpiricalMeasure& a, const EmpiricalMeasure& b)
{
    if (a.dim() != 1 || b.dim() != 1)
        throw Error("w2_empirical_1d: both measures must be univariate");
    return std::sqrt(w2_squared_sorted(a.sorted(), b.sorted()));
}

SlicedEstimate sw2_empirical_detail(const EmpiricalMeasure& a, const EmpiricalMeasure& b, const SlicingSpec& slicing)
{
    if (a.dim() != b.dim())
        throw Error("sw2_empirical: dimension mismatch (" + std::to_string(a.dim()) + " vs " +
                    std::to_string(b.dim()) + ")");
    if (a.dim() == 1)
        return {w2_empirical_1d(a, b), 0.0};
    check_slicing(slicing, a.dim());
    const Eigen::MatrixXd theta = slicing.directions();
    const SortedProfile pa = sliced_profile(a, theta);
    const SortedProfile pb = sliced_profile(b, theta);

    const std::size_t L = pa.slices;
    std::vector<double> w(L);
    double sum = 0.0;
    for (std::size_t l = 0; l < L; ++l) {
        w[l] = w2_squared_sorted(pa.slice(l), pb.slice(l));
        sum += w[l];
    }
    const double mean = sum / static_cast<double>(L);
    SlicedEstimate est;
    est.value = std::sqrt(mean);
    if (L > 1 && est.value > 0.0) {
        double ss = 0.0;
        for (double x : w)
            ss += (x - mean) * (x - mean);
        const double se_mean = std::sqrt(ss / static_cast<double>(L - 1) / static_cast<double>(L));
        est.standard_error = se_mean / (2.0 * est.value);
    }
    return est;
}

double sw2_empirical(const EmpiricalMeasure& a, const EmpiricalMeasure& b, const SlicingSpec& slicing)
{
    return sw2_empirical_detail(a, b, slicing).value;
}

namespace {

void check_covariance(const Eigen::MatrixXd& s, const char* name)
{
    if (s.rows() != s.cols())
        throw Error(std::string("gaussian: ") + name + " is not square");
    const double scale = 1.0 + s.cwiseAbs().maxCoeff();
    if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw Error(std::string("gaussian: ") + name + " is not symmetric");
}

Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& s, const char* name)
{
    const EigenResult eig = sym_eig(s);
    if (eig.values.size() > 0 && eig.values(eig.values.size() - 1) < -1e-10)
        throw Error(std::string("gaussian: ") + name + " is indefinite (eigenvalue " +
                    std::to_string(eig.values(eig.values.size() - 1)) + ")");
    Eigen::VectorXd root = eig.values.unaryExpr([](double v) { return v > 1e-12 ? std::sqrt(v) : 0.0; });
    return eig.vectors * root.asDiagonal() * eig.vectors.transpose();
}

} // namespace

double w2_gaussian(const Eigen::VectorXd& m1, const Eigen::MatrixXd& s1,
                   const Eigen::VectorXd& m2, const Eigen::MatrixXd& s2)
{
    check_covariance(s1, "S1");
    check_covariance(s2, "S2");
    if (m1.size() != m2.size() || s1.rows() != m1.size() || s2.rows() != m2.size())
        throw Error("w2_gaussian: dimension mismatch");
    psd_sqrt(s1, "S1");
    const Eigen::MatrixXd root2 = psd_sqrt(s2, "S2");
    const Eigen::MatrixXd inner = root2 * s1 * root2;
    const EigenResult eig = sym_eig(inner);
    double cross = 0.0;
    for (Eigen::Index k = 0; k < eig.values.size(); ++k)
        cross += eig.values(k) > 1e-12 ? std::sqrt(eig.values(k)) : 0.0;
    const double sq = (m1 - m2).squaredNorm() + s1.trace() + s2.trace() - 2.0 * cross;
    return std::sqrt(std::max(sq, 0.0));
}

namespace {
double log_beta(double a, double b)
{
    return boost::math::lgamma(a) + boost::math::lgamma(b) - boost::math::lgamma(a + b);
}
} // namespace

double hellinger_beta(double a1, double b1, double a2, double b2)
{
    if (!(a1 > 0.0) || !(b1 > 0.0) || !(a2 > 0.0) || !(b2 > 0.0))
        throw Error("hellinger_beta: parameters must be positive");
    const double log_bc = log_beta(0.5 * (a1 + a2), 0.5 * (b1 + b2)) - 0.5 * (log_beta(a1, b1) + log_beta(a2, b2));
    return std::clamp(1.0 - std::exp(log_bc), 0.0, 1.0);
}

double hellinger_gaussian_squared(const Eigen::VectorXd& m1, const Eigen::MatrixXd& s1,
                                  const Eigen::VectorXd& m2, const Eigen::MatrixXd& s2)
{
    check_covariance(s1, "S1");
    check_covariance(s2, "S2");
    if (m1.size() != m2.size() || s1.rows() != m1.size() || s2.rows() != m2.size())
        throw Error("hellinger_gaussian: dimension mismatch");
    const Eigen::MatrixXd avg = 0.5 * (s1 + s2);
    Eigen::LLT<Eigen::MatrixXd> llt(avg);
    if (llt.info() != Eigen::Success)
        throw Error("hellinger_gaussian: average covariance is singular");
    Eigen::LLT<Eigen::MatrixXd> l1(s1), l2(s2);
    if (l1.info() != Eigen::Success || l2.info() != Eigen::Success)
        throw Error("hellinger_gaussian: covariances must be positive definite");

    auto logdet = [](const Eigen::LLT<Eigen::MatrixXd>& f) {
        return 2.0 * f.matrixL().toDenseMatrix().diagonal().array().log().sum();
    };
    const Eigen::VectorXd dm = m1 - m2;
    const double mahal = dm.dot(llt.solve(dm));
    const double log_bc = 0.25 * logdet(l1) + 0.25 * logdet(l2) - 0.5 * logdet(llt) - 0.125 * mahal;
    return std::clamp(1.0 - std::exp(log_bc), 0.0, 1.0);
}

double hellinger_gaussian(const Eigen::VectorXd& m1, const Eigen::MatrixXd& s1,
                          const Eigen::VectorXd& m2, const Eigen::MatrixXd& s2)
{
    return std::sqrt(hellinger_gaussian_squared(m1, s1, m2, s2));
}

DistanceMatrix pairwise_matrix(const std::vector<EmpiricalMeasure>& measures, Metric metric,
                               const std::optional<SlicingSpec>& slicing)
{
    if (measures.size() < 2)
        throw Error("pairwise_matrix: need at least 2 measures");
    const auto profiles = sorted_profiles(measures, metric, slicing);
    const auto n = static_cast<std::ptrdiff_t>(measures.size());
    DistanceMatrix out;
    out.metric = metric;
    out.values = Eigen::MatrixXd::Zero(n, n);
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        for (std::ptrdiff_t k = i + 1; k < n; ++k)
            out.values(i, k) = profile_distance(profiles[i], profiles[k]);
    }
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        for (std::ptrdiff_t k = i + 1; k < n; ++k)
            out.values(k, i) = out.values(i, k);
    }
    return out;
}

Eigen::MatrixXd cross_matrix(const std::vector<EmpiricalMeasure>& rows, const std::vector<EmpiricalMeasure>& cols,
                             Metric metric, const std::optional<SlicingSpec>& slicing)
{
    if (cols.empty())
        throw Error("cross_matrix: column set is empty");
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    if (rows.empty())
        return out;
    if (common_dimension(rows) != common_dimension(cols))
        throw Error("cross_matrix: dimension mismatch between row and column measures");
    const auto rp = sorted_profiles(rows, metric, slicing);
    const auto cp = sorted_profiles(cols, metric, slicing);
    const auto nr = static_cast<std::ptrdiff_t>(rows.size());
    const auto nc = static_cast<std::ptrdiff_t>(cols.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < nr; ++i) {
        for (std::ptrdiff_t k = 0; k < nc; ++k)
            out(i, k) = profile_distance(rp[i], cp[k]);
    }
    return out;
}

void write_distance_csv(const std::filesystem::path& path, const DistanceMatrix& d)
{
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write " + path.string());
    char buf[32];
    for (Eigen::Index i = 0; i < d.values.rows(); ++i) {
        for (Eigen::Index k = 0; k < d.values.cols(); ++k) {
            std::snprintf(buf, sizeof buf, "%.17g", d.values(i, k));
            out << (k ? "," : "") << buf;
        }
        out << '\n';
    }
}

} // namespace wgsir
