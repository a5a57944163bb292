#include "wgsir/simgen.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/beta.hpp>

#include "wgsir/ot_distances.hpp"

namespace wgsir {

namespace {

struct ScenarioName
{
    ScenarioId id;
    const char* name;
};

constexpr ScenarioName kScenarioNames[] = {
    {ScenarioId::I1, "I-1"},   {ScenarioId::I2, "I-2"},   {ScenarioId::I3, "I-3"},   {ScenarioId::I4, "I-4"},
    {ScenarioId::II1, "II-1"}, {ScenarioId::II2, "II-2"}, {ScenarioId::II3, "II-3"}, {ScenarioId::II4, "II-4"},
};

constexpr double kResponseMeanSd = 0.2;
constexpr double kTruncLo = 0.2;
constexpr double kTruncHi = 2.0;

// Reference laws for Models I: Beta(2, 1) and Beta(2, 3).
constexpr double kMu1A = 2.0, kMu1B = 1.0;
constexpr double kMu2A = 2.0, kMu2B = 3.0;

struct ReferenceGrids
{
    std::vector<double> levels;
    std::vector<double> mu1;
    std::vector<double> mu2;
};

const ReferenceGrids& reference_grids()
{
    static const ReferenceGrids grids = [] {
        ReferenceGrids g;
        g.levels = midpoint_levels(kQuantileGridSize);
        g.mu1 = beta_quantiles(kMu1A, kMu1B, g.levels);
        g.mu2 = beta_quantiles(kMu2A, kMu2B, g.levels);
        return g;
    }();
    return grids;
}

EmpiricalMeasure univariate_normal_sample(double mean, double sd, std::size_t m, Rng& rng)
{
    std::vector<double> v(m);
    for (auto& x : v)
        x = rng.normal(mean, sd);
    return EmpiricalMeasure(std::move(v), 1);
}

// Draws m points mean + factor * z with z standard bivariate normal.
EmpiricalMeasure bivariate_normal_sample(const Eigen::Vector2d& mean, const Eigen::Matrix2d& factor, std::size_t m,
                                         Rng& rng)
{
    std::vector<double> v(2 * m);
    for (std::size_t j = 0; j < m; ++j) {
        const double z1 = rng.normal();
        const double z2 = rng.normal();
        v[2 * j] = mean(0) + factor(0, 0) * z1 + factor(0, 1) * z2;
        v[2 * j + 1] = mean(1) + factor(1, 0) * z1 + factor(1, 1) * z2;
    }
    return EmpiricalMeasure(std::move(v), 2);
}

std::vector<std::string> default_ids(std::size_t n)
{
    std::vector<std::string> ids(n);
    for (std::size_t i = 0; i < n; ++i)
        ids[i] = "obs" + std::to_string(i + 1);
    return ids;
}

} // namespace

std::string to_string(ScenarioId id)
{
    for (const auto& s : kScenarioNames) {
        if (s.id == id)
            return s.name;
    }
    return "?";
}

ScenarioId parse_scenario(const std::string& name)
{
    for (const auto& s : kScenarioNames) {
        if (name == s.name)
            return s.id;
    }
    throw Error("unknown scenario '" + name + "' (expected I-1..I-4 or II-1..II-4)");
}

bool is_model_one(ScenarioId id)
{
    return id == ScenarioId::I1 || id == ScenarioId::I2 || id == ScenarioId::I3 || id == ScenarioId::I4;
}

std::size_t true_dimension(ScenarioId id)
{
    return (id == ScenarioId::I1 || id == ScenarioId::II1) ? 1 : 2;
}

void SimScenario::validate() const
{
    if (n < 2)
        throw Error("scenario: n must be at least 2");
    if (m < 2)
        throw Error("scenario: m must be at least 2");
}

double beta_quantile(double a, double b, double p)
{
    const double levels[] = {p};
    return beta_quantiles(a, b, levels).front();
}

std::vector<double> beta_quantiles(double a, double b, std::span<const double> levels)
{
    if (!(a > 0.0) || !(b > 0.0))
        throw Error("beta_quantile: parameters must be positive");
    std::vector<double> out(levels.size());
    for (std::size_t k = 0; k < levels.size(); ++k) {
        const double p = levels[k];
        if (!(p >= 0.0 && p <= 1.0))
            throw Error("beta_quantile: probability outside [0, 1]");
        out[k] = p <= 0.0 ? 0.0 : p >= 1.0 ? 1.0 : boost::math::ibeta_inv(a, b, p);
    }
    return out;
}

std::vector<double> midpoint_levels(std::size_t count)
{
    std::vector<double> s(count);
    for (std::size_t j = 0; j < count; ++j)
        s[j] = (static_cast<double>(j) + 0.5) / static_cast<double>(count);
    return s;
}

double w2_from_quantiles(std::span<const double> q1, std::span<const double> q2)
{
    if (q1.size() != q2.size() || q1.empty())
        throw Error("w2_from_quantiles: grids must be nonempty and of equal size");
    double acc = 0.0;
    for (std::size_t j = 0; j < q1.size(); ++j)
        acc += (q1[j] - q2[j]) * (q1[j] - q2[j]);
    return std::sqrt(acc / static_cast<double>(q1.size()));
}

double w2_beta(double a1, double b1, double a2, double b2)
{
    const auto levels = midpoint_levels(kQuantileGridSize);
    return w2_from_quantiles(beta_quantiles(a1, b1, levels), beta_quantiles(a2, b2, levels));
}

GeneratedData gen_model_I(const SimScenario& scenario, Rng& rng)
{
    scenario.validate();
    if (!is_model_one(scenario.id))
        throw Error("gen_model_I: scenario " + to_string(scenario.id) + " is not a Model I scenario");
    const std::size_t n = scenario.n;
    const std::size_t m = scenario.m;
    const auto ni = static_cast<Eigen::Index>(n);
    const bool needs_w2 = scenario.id == ScenarioId::I1 || scenario.id == ScenarioId::I2;
    const ReferenceGrids* grids = needs_w2 ? &reference_grids() : nullptr;

    GeneratedData out;
    out.d0 = true_dimension(scenario.id);
    out.true_predictors.resize(ni, static_cast<Eigen::Index>(out.d0));
    out.predictor_params.resize(ni, 2);
    out.response.mean.resize(ni, 1);
    out.response.spectrum.resize(ni, 1);
    out.response.covariance.reserve(n);
    out.data.ids = default_ids(n);
    out.data.predictors.reserve(n);
    out.data.responses.reserve(n);

    for (std::size_t i = 0; i < n; ++i) {
        const auto row = static_cast<Eigen::Index>(i);
        const double a = sample_gamma(2.0, 1.0, rng);
        const double b = sample_gamma(2.0, 3.0, rng);
        std::vector<double> xs(m);
        for (auto& x : xs)
            x = sample_beta(a, b, rng);
        out.data.predictors.emplace_back(std::move(xs), 1);
        out.predictor_params(row, 0) = a;
        out.predictor_params(row, 1) = b;

        double w1 = 0.0, w2 = 0.0;
        if (needs_w2) {
            const auto q = beta_quantiles(a, b, grids->levels);
            w1 = w2_from_quantiles(q, grids->mu1);
            w2 = w2_from_quantiles(q, grids->mu2);
        }

        double mu_y = 0.0;
        double sigma_y = 1.0;
        switch (scenario.id) {
        case ScenarioId::I1:
            mu_y = rng.normal(std::exp(w1 * w1) + std::exp(w2 * w2), kResponseMeanSd);
            sigma_y = 1.0;
            out.true_predictors(row, 0) = w1;
            break;
        case ScenarioId::I2:
            mu_y = rng.normal(std::exp(w1 * w1), kResponseMeanSd);
            sigma_y = sample_gamma(w2 * w2, w2, rng);
            out.true_predictors(row, 0) = w1;
            out.true_predictors(row, 1) = w2;
            break;
        case ScenarioId::I3: {
            const double h1 = hellinger_beta(a, b, kMu1A, kMu1B);
            const double h2 = hellinger_beta(a, b, kMu2A, kMu2B);
            mu_y = rng.normal(std::exp(h1), kResponseMeanSd);
            sigma_y = std::exp(h2);
            out.true_predictors(row, 0) = h1;
            out.true_predictors(row, 1) = h2;
            break;
        }
        case ScenarioId::I4: {
            const double mean = a / (a + b);
            const double var = a * b / ((a + b) * (a + b) * (a + b + 1.0));
            mu_y = rng.normal(mean, kResponseMeanSd);
            sigma_y = sample_gamma(var, std::sqrt(var), rng);
            out.true_predictors(row, 0) = mean;
            out.true_predictors(row, 1) = var;
            break;
        }
        default:
            break;
        }
        out.response.mean(row, 0) = mu_y;
        out.response.spectrum(row, 0) = sigma_y;
        out.response.covariance.push_back(Eigen::MatrixXd::Constant(1, 1, sigma_y * sigma_y));
        out.data.responses.push_back(univariate_normal_sample(mu_y, sigma_y, m, rng));
    }
    return out;
}

GeneratedData gen_model_II(const SimScenario& scenario, Rng& rng)
{
    scenario.validate();
    if (is_model_one(scenario.id))
        throw Error("gen_model_II: scenario " + to_string(scenario.id) + " is not a Model II scenario");
    const std::size_t n = scenario.n;
    const std::size_t m = scenario.m;
    const auto ni = static_cast<Eigen::Index>(n);

    const Eigen::Vector2d mu1_mean(-1.0, 0.0);
    const Eigen::Matrix2d mu1_cov = Eigen::Vector2d(1.0, 0.5).asDiagonal();
    const Eigen::Vector2d mu2_mean(0.0, 1.0);
    const Eigen::Matrix2d mu2_cov = Eigen::Vector2d(0.5, 1.0).asDiagonal();
    const double h = std::sqrt(2.0) / 2.0;
    Eigen::Matrix2d rotation;
    if (scenario.id == ScenarioId::II4)
        rotation << h, h, h, -h;
    else
        rotation << h, h, -h, h;
    const Eigen::Vector2d ones(1.0, 1.0);

    GeneratedData out;
    out.d0 = true_dimension(scenario.id);
    out.true_predictors.resize(ni, static_cast<Eigen::Index>(out.d0));
    out.predictor_params.resize(ni, 2);
    out.response.mean.resize(ni, 2);
    out.response.spectrum.resize(ni, 2);
    out.response.covariance.reserve(n);
    out.data.ids = default_ids(n);
    out.data.predictors.reserve(n);
    out.data.responses.reserve(n);

    for (std::size_t i = 0; i < n; ++i) {
        const auto row = static_cast<Eigen::Index>(i);
        const double a = rng.normal(0.5, 0.5);
        const double b = sample_beta(2.0, 3.0, rng);
        if (!(b > 0.0))
            throw Error("gen_model_II: nonpositive predictor variance");
        const Eigen::Vector2d x_mean = a * ones;
        const Eigen::Matrix2d x_cov = b * Eigen::Matrix2d::Identity();
        out.data.predictors.push_back(
            bivariate_normal_sample(x_mean, std::sqrt(b) * Eigen::Matrix2d::Identity(), m, rng));
        out.predictor_params(row, 0) = a;
        out.predictor_params(row, 1) = b;

        const double w1 = w2_gaussian(x_mean, x_cov, mu1_mean, mu1_cov);
        const double w2 = w2_gaussian(x_mean, x_cov, mu2_mean, mu2_cov);

        Eigen::Vector2d mu_y;
        Eigen::Vector2d spectrum(1.0, 1.0);
        switch (scenario.id) {
        case ScenarioId::II1:
            mu_y = w1 * ones + Eigen::Vector2d(rng.normal(), rng.normal());
            out.true_predictors(row, 0) = w1;
            break;
        case ScenarioId::II2:
            mu_y = std::sqrt(w1) * ones;
            spectrum << std::abs(rng.normal(w2, 0.5)), std::abs(rng.normal(w2, 0.5));
            out.true_predictors(row, 0) = w1;
            out.true_predictors(row, 1) = w2;
            break;
        case ScenarioId::II3:
            mu_y = w1 * ones + Eigen::Vector2d(rng.normal(), rng.normal());
            spectrum(0) = sample_truncated_gamma(w2 * w2, w2, kTruncLo, kTruncHi, rng);
            spectrum(1) = sample_truncated_gamma(w2 * w2, w2, kTruncLo, kTruncHi, rng);
            out.true_predictors(row, 0) = w1;
            out.true_predictors(row, 1) = w2;
            break;
        case ScenarioId::II4: {
            const double hh1 = hellinger_gaussian_squared(x_mean, x_cov, mu1_mean, mu1_cov);
            const double hh2 = hellinger_gaussian_squared(x_mean, x_cov, mu2_mean, mu2_cov);
            const double h2 = std::sqrt(hh2);
            mu_y = hh1 * ones + Eigen::Vector2d(rng.normal(), rng.normal());
            spectrum(0) = sample_truncated_gamma(hh2, h2, kTruncLo, kTruncHi, rng);
            spectrum(1) = sample_truncated_gamma(hh2, h2, kTruncLo, kTruncHi, rng);
            out.true_predictors(row, 0) = std::sqrt(hh1);
            out.true_predictors(row, 1) = h2;
            break;
        }
        default:
            break;
        }
        Eigen::Matrix2d cov = Eigen::Matrix2d::Identity();
        Eigen::Matrix2d factor = Eigen::Matrix2d::Identity();
        if (scenario.id != ScenarioId::II1) {
            cov = rotation * spectrum.asDiagonal() * rotation.transpose();
            factor = rotation * spectrum.cwiseSqrt().asDiagonal();
        }
        out.response.mean.row(row) = mu_y.transpose();
        out.response.spectrum.row(row) = spectrum.transpose();
        out.response.covariance.push_back(cov);
        out.data.responses.push_back(bivariate_normal_sample(mu_y, factor, m, rng));
    }
    return out;
}

GeneratedData generate(const SimScenario& scenario, Rng& rng)
{
    return is_model_one(scenario.id) ? gen_model_I(scenario, rng) : gen_model_II(scenario, rng);
}

} // namespace wgsir
