#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wgsir/measures.hpp"

namespace wgsir {

enum class Metric { W2, SW2 };

std::string to_string(Metric metric);
Metric parse_metric(const std::string& name);

/// Number of midpoint quantile levels used when two 1-D samples differ in size.
inline constexpr std::size_t kQuantileGridSize = 1000;

/// Random projection directions for the sliced Wasserstein estimator.
/// Directions are g/|g| with g standard normal, drawn from `seed`.
struct SlicingSpec
{
    std::size_t L = 50;
    std::uint64_t seed = 0;
    std::size_t dim = 2;

    void validate() const;
    /// dim x L matrix of unit columns.
    Eigen::MatrixXd directions() const;
};

/// W2 between univariate empirical measures: order statistics for equal
/// sizes, the midpoint quantile grid otherwise.
double w2_empirical_1d(const EmpiricalMeasure& a, const EmpiricalMeasure& b);

struct SlicedEstimate
{
    double value = 0.0;
    /// Delta-method standard error of the Monte-Carlo average.
    double standard_error = 0.0;
};

/// Monte-Carlo sliced W2. Univariate inputs bypass slicing.
SlicedEstimate sw2_empirical_detail(const EmpiricalMeasure& a, const EmpiricalMeasure& b, const SlicingSpec& slicing);
double sw2_empirical(const EmpiricalMeasure& a, const EmpiricalMeasure& b, const SlicingSpec& slicing);

/// Closed-form W2 between Gaussians.
double w2_gaussian(const Eigen::VectorXd& m1, const Eigen::MatrixXd& s1,
                   const Eigen::VectorXd& m2, const Eigen::MatrixXd& s2);

/// 1 - Bhattacharyya coefficient between Beta(a1, b1) and Beta(a2, b2).
double hellinger_beta(double a1, double b1, double a2, double b2);

/// Squared Hellinger distance between Gaussians, 1 - Bhattacharyya coefficient.
double hellinger_gaussian_squared(const Eigen::VectorXd& m1, const Eigen::MatrixXd& s1,
                                  const Eigen::VectorXd& m2, const Eigen::MatrixXd& s2);
/// Hellinger distance between Gaussians (square root of the above).
double hellinger_gaussian(const Eigen::VectorXd& m1, const Eigen::MatrixXd& s1,
                          const Eigen::VectorXd& m2, const Eigen::MatrixXd& s2);

struct DistanceMatrix
{
    Eigen::MatrixXd values;
    Metric metric = Metric::W2;

    std::size_t n() const noexcept { return static_cast<std::size_t>(values.rows()); }
};

/// Sorted 1-D profiles of a measure: one row per slice (a single row for
/// univariate measures), each holding the ascending projected sample.
struct SortedProfile
{
    std::size_t slices = 0;
    std::size_t m = 0;
    std::vector<double> data;

    std::span<const double> slice(std::size_t l) const
    {
        return std::span<const double>(data).subspan(l * m, m);
    }
};

/// Projects and sorts every measure once. `directions` is ignored for
/// univariate input and required otherwise (SW2 only).
std::vector<SortedProfile> sorted_profiles(const std::vector<EmpiricalMeasure>& measures, Metric metric,
                                           const std::optional<SlicingSpec>& slicing);

/// Squared W2 between two sorted samples; equal sizes pair order statistics,
/// unequal sizes use the midpoint quantile grid.
double w2_squared_sorted(std::span<const double> x, std::span<const double> y);

/// Mean over slices of the squared 1-D distances, square-rooted.
double profile_distance(const SortedProfile& a, const SortedProfile& b);

/// Symmetric n x n matrix of pairwise distances (OpenMP over rows). For SW2
/// one direction set is drawn from `slicing` and shared by all pairs.
DistanceMatrix pairwise_matrix(const std::vector<EmpiricalMeasure>& measures, Metric metric,
                               const std::optional<SlicingSpec>& slicing = std::nullopt);

/// Rectangular block of distances between `rows` and `cols`, same conventions.
Eigen::MatrixXd cross_matrix(const std::vector<EmpiricalMeasure>& rows, const std::vector<EmpiricalMeasure>& cols,
                             Metric metric, const std::optional<SlicingSpec>& slicing = std::nullopt);

/// Header-free square CSV dump.
void write_distance_csv(const std::filesystem::path& path, const DistanceMatrix& d);

} // namespace wgsir
