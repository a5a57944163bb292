#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "wgsir/gsir.hpp"
#include "wgsir/kernels.hpp"
#include "wgsir/selection.hpp"
#include "wgsir/simgen.hpp"

namespace wgsir {

struct ExperimentConfig
{
    std::optional<ScenarioId> scenario;
    std::filesystem::path x_path;
    std::filesystem::path y_path;
    std::size_t n = 100;
    std::size_t m = 50;
    std::size_t L = 50;
    std::size_t replications = 20;
    std::uint64_t seed = 7;
    Variant variant = Variant::Gsir1;
    KernelFamily kernel = KernelFamily::Gaussian;
    /// Real-data mode only; synthetic runs pick W2 for univariate sides and SW2 otherwise.
    Metric metric = Metric::SW2;
    /// Empty means the default {1e-6, ..., 1}.
    std::vector<double> eps_grid;
    /// Fixed dimension; otherwise chosen by the BIC-type criterion.
    std::optional<std::size_t> d;
    std::filesystem::path out;
    std::filesystem::path model_out;
    /// Record wall-clock time per replication (makes output nondeterministic).
    bool timing = false;
    /// OpenMP threads; 0 keeps the runtime default.
    int threads = 0;

    void validate_synthetic() const;
    void validate_real() const;
};

/// Overlays the keys present in `doc` onto `base`. Keys use the field names above
/// ("x" and "y" for the input paths).
ExperimentConfig config_from_json(const nlohmann::json& doc, ExperimentConfig base = {});
ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base = {});

struct ResultRow
{
    std::string scenario;
    std::string variant;
    std::size_t n = 0;
    std::size_t m = 0;
    std::size_t replication = 0;
    double rvmr = 0.0;
    double dcor = 0.0;
    std::size_t d_hat = 0;
    double eps_x = 0.0;
    double eps_y = 0.0;
    std::optional<double> wall_time_seconds;
};

struct MetricSummary
{
    double mean = 0.0;
    /// Sample standard deviation over sqrt(count).
    double standard_error = 0.0;
};

MetricSummary summarize(const std::vector<double>& values);

struct ExperimentSummary
{
    std::size_t requested = 0;
    std::size_t completed = 0;
    MetricSummary rvmr;
    MetricSummary dcor;
    double d_hat_mean = 0.0;
};

struct ExperimentResult
{
    std::vector<ResultRow> rows;
    ExperimentSummary summary;
    std::vector<std::string> failures;
};

/// Estimation settings shared by the synthetic and real-data paths.
struct FitOptions
{
    Variant variant = Variant::Gsir1;
    KernelFamily kernel = KernelFamily::Gaussian;
    /// Univariate sides always reduce to W2; SW2 requires this for r >= 2.
    Metric metric = Metric::SW2;
    std::size_t L = 50;
    std::uint64_t slicing_seed = 0;
    std::vector<double> eps_grid;
    std::optional<std::size_t> d;
};

struct FitOutput
{
    /// Fit trimmed to max(d_hat, 1) directions.
    GsirFit fit;
    /// Selected (or fixed) dimension; may be 0.
    std::size_t d_hat = 0;
    EpsilonChoice eps;
    OrderSelectionResult order;
    DistanceMatrix dx;
    DistanceMatrix dy;
};

/// Distances, default bandwidths, GCV ridge constants, GSIR fit, and order selection.
FitOutput fit_dataset(const DatasetPair& data, const FitOptions& options);

/// One synthetic replication: generate 2n pairs, train on the first n,
/// evaluate out-of-sample predictors on the last n.
ResultRow run_replication(const ExperimentConfig& cfg, std::size_t replication);

/// All replications (OpenMP-parallel); rows are kept in replication order.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// ResultRow columns, then '#' trailer lines with the summary.
void write_results_csv(std::ostream& out, const ExperimentResult& result);

/// Scenario data for replication `replication` of `cfg` (2n observations).
GeneratedData replication_data(const ExperimentConfig& cfg, std::size_t replication);
std::uint64_t replication_slicing_seed(std::uint64_t seed, std::size_t replication);

/// Pairs predictor and response files by id; order follows the predictor file.
DatasetPair pair_by_id(const LabeledMeasures& x, const LabeledMeasures& y);

struct RealDataResult
{
    std::vector<std::string> ids;
    FitOutput output;
    /// n x d_hat in-sample predictors.
    Eigen::MatrixXd predictors;
};

RealDataResult run_real_data(const ExperimentConfig& cfg);
RealDataResult fit_real_data(const DatasetPair& data, const ExperimentConfig& cfg);

/// `id,sp1..spd` rows followed by '#' lines with d_hat, ridge constants and the spectrum.
void write_predictors_csv(std::ostream& out, const RealDataResult& result);

} // namespace wgsir
