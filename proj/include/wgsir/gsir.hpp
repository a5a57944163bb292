#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "wgsir/kernels.hpp"
#include "wgsir/measures.hpp"
#include "wgsir/ot_distances.hpp"

namespace wgsir {

/// GSIR1 uses A = I; GSIR2 uses the regularized inverse response covariance.
enum class Variant { Gsir1, Gsir2 };

std::string to_string(Variant variant);
Variant parse_variant(const std::string& name);

/// Relative ridge constants; eta = eps * lambda_max(G) is formed at fit time.
struct RegularizationSpec
{
    double eps_x = 1e-3;
    double eps_y = 1e-3;

    void validate() const;
};

/// What is needed to evaluate kernels against the training predictors.
struct TrainingReference
{
    std::vector<EmpiricalMeasure> measures;
    Metric metric = Metric::W2;
    std::optional<SlicingSpec> slicing;
};

struct GsirFit
{
    Variant variant = Variant::Gsir1;
    /// Full spectrum of the assembled operator, descending.
    Eigen::VectorXd eigenvalues;
    /// Leading d eigenvectors (n x d).
    Eigen::MatrixXd eigenvectors;
    /// Column j holds (G_X + eta_X I)^{-1} v_j (n x d).
    Eigen::MatrixXd coefficients;
    std::size_t d = 0;
    RegularizationSpec reg;
    double eta_x = 0.0;
    double eta_y = 0.0;
    GramMatrix train_gram;
    /// Training-sample mean of K_X Q C, subtracted out of sample.
    Eigen::RowVectorXd train_offset;
    std::shared_ptr<const TrainingReference> train_refs;

    std::size_t n() const noexcept { return train_gram.n(); }
};

/// The symmetric n x n operator whose eigenvectors define the predictors.
Eigen::MatrixXd assemble_lambda(const Eigen::MatrixXd& gx, const Eigen::MatrixXd& gy, double eta_x, double eta_y,
                                Variant variant);

/// Fits GSIR on centered Gram matrices, keeping the top d directions and the
/// full spectrum.
GsirFit fit(const GramMatrix& gx, const GramMatrix& gy, const RegularizationSpec& reg, Variant variant,
            std::size_t d, std::shared_ptr<const TrainingReference> refs = nullptr);

/// Copy of `f` keeping only the leading d <= f.d directions.
GsirFit retain(const GsirFit& f, std::size_t d);

/// G_X C: the fitted predictors at the training observations (n x d).
Eigen::MatrixXd predictors_insample(const GsirFit& f);

/// Predictors at new measures (t x d), centered so that evaluating at the
/// training measures reproduces predictors_insample.
Eigen::MatrixXd predictors_outsample(const GsirFit& f, const std::vector<EmpiricalMeasure>& test);

/// Same as predictors_outsample given precomputed distances (t x n) to the
/// training measures.
Eigen::MatrixXd predictors_from_distances(const GsirFit& f, const Eigen::MatrixXd& distances_to_train);

/// JSON document with the spectrum, coefficients, kernel, slicing and
/// per-measure training digests.
nlohmann::json fit_to_json(const GsirFit& f);

/// Rebuilds a fit for out-of-sample use. `training` must match the stored
/// digests in order.
GsirFit fit_from_json(const nlohmann::json& doc, std::vector<EmpiricalMeasure> training);

void save_fit(const std::filesystem::path& path, const GsirFit& f);
GsirFit load_fit(const std::filesystem::path& path, std::vector<EmpiricalMeasure> training);

} // namespace wgsir
