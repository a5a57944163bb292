#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wgsir/measures.hpp"
#include "wgsir/random.hpp"

namespace wgsir {

/// The eight synthetic regression models. Models I-k use univariate Beta
/// predictors and Gaussian responses; Models II-k use bivariate Gaussians
/// on both sides.
enum class ScenarioId { I1, I2, I3, I4, II1, II2, II3, II4 };

std::string to_string(ScenarioId id);
ScenarioId parse_scenario(const std::string& name);
bool is_model_one(ScenarioId id);
/// Number of true sufficient predictors.
std::size_t true_dimension(ScenarioId id);

struct SimScenario
{
    ScenarioId id = ScenarioId::I1;
    std::size_t n = 100;
    std::size_t m = 50;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Per-observation parameters of the response law.
struct ResponseParams
{
    /// n x r means.
    Eigen::MatrixXd mean;
    /// r x r covariance per observation.
    std::vector<Eigen::MatrixXd> covariance;
    /// n x r: sigma_Y for Models I, the diagonal of Lambda for Models II.
    Eigen::MatrixXd spectrum;
};

struct GeneratedData
{
    DatasetPair data;
    /// n x d0 true sufficient predictors.
    Eigen::MatrixXd true_predictors;
    std::size_t d0 = 0;
    /// n x 2 predictor-law parameters: (a_i, b_i).
    Eigen::MatrixXd predictor_params;
    ResponseParams response;
};

/// Inverse of the regularized incomplete Beta function.
double beta_quantile(double a, double b, double p);

/// beta_quantile at each level.
std::vector<double> beta_quantiles(double a, double b, std::span<const double> levels);

/// Midpoint levels (j - 1/2) / N for the quantile grid.
std::vector<double> midpoint_levels(std::size_t count);

/// W2 between two univariate laws given their quantiles on the same midpoint grid.
double w2_from_quantiles(std::span<const double> q1, std::span<const double> q2);

/// W2 between Beta laws on the 1000-point midpoint quantile grid.
double w2_beta(double a1, double b1, double a2, double b2);

GeneratedData gen_model_I(const SimScenario& scenario, Rng& rng);
GeneratedData gen_model_II(const SimScenario& scenario, Rng& rng);
/// Dispatches on the scenario family.
GeneratedData generate(const SimScenario& scenario, Rng& rng);

} // namespace wgsir
