#include "wgsir/gsir.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "wgsir/linalg.hpp"

namespace wgsir {

std::string to_string(Variant variant)
{
    return variant == Variant::Gsir1 ? "gsir1" : "gsir2";
}

Variant parse_variant(const std::string& name)
{
    if (name == "gsir1" || name == "GSIR1" || name == "1")
        return Variant::Gsir1;
    if (name == "gsir2" || name == "GSIR2" || name == "2")
        return Variant::Gsir2;
    throw Error("unknown variant '" + name + "' (expected gsir1 or gsir2)");
}

void RegularizationSpec::validate() const
{
    if (!(eps_x > 0.0) || !std::isfinite(eps_x) || !(eps_y > 0.0) || !std::isfinite(eps_y))
        throw Error("regularization: eps_x and eps_y must be positive and finite");
}

Eigen::MatrixXd assemble_lambda(const Eigen::MatrixXd& gx, const Eigen::MatrixXd& gy, double eta_x, double eta_y,
                                Variant variant)
{
    if (gx.rows() != gx.cols() || gy.rows() != gy.cols() || gx.rows() != gy.rows())
        throw Error("assemble_lambda: Gram matrices must be square with equal n");
    // (G_X + eta I)^{-1} G_X; symmetric because the two factors commute.
    Eigen::MatrixXd m = ridge_inverse_apply(gx, eta_x, gx);
    m = 0.5 * (m + m.transpose());
    Eigen::MatrixXd middle;
    if (variant == Variant::Gsir1) {
        middle = gy;
    } else {
        middle = gy * ridge_inverse_apply(gy, eta_y, Eigen::MatrixXd::Identity(gy.rows(), gy.cols()));
        middle = 0.5 * (middle + middle.transpose());
    }
    Eigen::MatrixXd lambda = m * middle * m;
    return 0.5 * (lambda + lambda.transpose());
}

GsirFit fit(const GramMatrix& gx, const GramMatrix& gy, const RegularizationSpec& reg, Variant variant,
            std::size_t d, std::shared_ptr<const TrainingReference> refs)
{
    reg.validate();
    const std::size_t n = gx.n();
    if (gy.n() != n)
        throw Error("gsir fit: X has " + std::to_string(n) + " observations but Y has " + std::to_string(gy.n()));
    if (d == 0 || d > n)
        throw Error("gsir fit: d must lie in [1, n]");
    if (refs && refs->measures.size() != n)
        throw Error("gsir fit: training reference size does not match the Gram matrix");

    GsirFit f;
    f.variant = variant;
    f.reg = reg;
    f.eta_x = reg.eps_x * gx.lambda_max;
    f.eta_y = reg.eps_y * gy.lambda_max;
    if (!(f.eta_x > 0.0))
        throw Error("gsir fit: lambda_max(G_X) is not positive (constant predictor kernel)");
    if (variant == Variant::Gsir2 && !(f.eta_y > 0.0))
        throw Error("gsir fit: lambda_max(G_Y) is not positive (constant response kernel)");

    const Eigen::MatrixXd lambda = assemble_lambda(gx.G, gy.G, f.eta_x, f.eta_y, variant);
    const EigenResult eig = sym_eig(lambda);
    f.eigenvalues = eig.values;
    f.d = d;
    f.eigenvectors = eig.vectors.leftCols(static_cast<Eigen::Index>(d));
    f.coefficients = ridge_inverse_apply(gx.G, f.eta_x, f.eigenvectors);
    f.train_gram = gx;
    const Eigen::MatrixXd qc = f.coefficients.rowwise() - f.coefficients.colwise().mean();
    f.train_offset = (gx.K * qc).colwise().mean();
    f.train_refs = std::move(refs);
    return f;
}

GsirFit retain(const GsirFit& f, std::size_t d)
{
    if (d == 0 || d > f.d)
        throw Error("retain: d must lie in [1, " + std::to_string(f.d) + "]");
    GsirFit out = f;
    const auto k = static_cast<Eigen::Index>(d);
    out.d = d;
    out.eigenvectors = f.eigenvectors.leftCols(k);
    out.coefficients = f.coefficients.leftCols(k);
    out.train_offset = f.train_offset.leftCols(k);
    return out;
}

Eigen::MatrixXd predictors_insample(const GsirFit& f)
{
    return f.train_gram.G * f.coefficients;
}

Eigen::MatrixXd predictors_from_distances(const GsirFit& f, const Eigen::MatrixXd& distances_to_train)
{
    const auto n = static_cast<Eigen::Index>(f.n());
    if (distances_to_train.cols() != n)
        throw Error("predictors_outsample: distance block has " + std::to_string(distances_to_train.cols()) +
                    " columns, expected " + std::to_string(n));
    const Eigen::MatrixXd k = kernel_values(distances_to_train, f.train_gram.spec);
    const Eigen::MatrixXd qc = f.coefficients.rowwise() - f.coefficients.colwise().mean();
    Eigen::MatrixXd out = k * qc;
    out.rowwise() -= f.train_offset;
    return out;
}

Eigen::MatrixXd predictors_outsample(const GsirFit& f, const std::vector<EmpiricalMeasure>& test)
{
    if (test.empty())
        return Eigen::MatrixXd(0, static_cast<Eigen::Index>(f.d));
    if (!f.train_refs)
        throw Error("predictors_outsample: fit carries no training reference");
    const auto& refs = *f.train_refs;
    const std::size_t train_dim = common_dimension(refs.measures);
    const std::size_t test_dim = common_dimension(test);
    if (train_dim != test_dim)
        throw Error("predictors_outsample: test measures have dimension " + std::to_string(test_dim) +
                    ", training measures " + std::to_string(train_dim));
    const Eigen::MatrixXd dist = cross_matrix(test, refs.measures, refs.metric, refs.slicing);
    return predictors_from_distances(f, dist);
}

namespace {

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m)
{
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& rows, Eigen::Index cols)
{
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), cols);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const auto& row = rows.at(static_cast<std::size_t>(i));
        if (static_cast<Eigen::Index>(row.size()) != cols)
            throw Error("fit json: ragged matrix");
        for (Eigen::Index j = 0; j < cols; ++j)
            m(i, j) = row.at(static_cast<std::size_t>(j)).get<double>();
    }
    return m;
}

std::string hex_digest(std::uint64_t h)
{
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

} // namespace

nlohmann::json fit_to_json(const GsirFit& f)
{
    nlohmann::json doc;
    doc["format"] = "wgsir-fit";
    doc["version"] = 1;
    doc["variant"] = to_string(f.variant);
    doc["n"] = f.n();
    doc["d"] = f.d;
    doc["eps_x"] = f.reg.eps_x;
    doc["eps_y"] = f.reg.eps_y;
    doc["eta_x"] = f.eta_x;
    doc["eta_y"] = f.eta_y;
    doc["eigenvalues"] = std::vector<double>(f.eigenvalues.data(), f.eigenvalues.data() + f.eigenvalues.size());
    doc["coefficients"] = matrix_to_json(f.coefficients);
    doc["kernel"] = {{"family", to_string(f.train_gram.spec.family)}, {"gamma", f.train_gram.spec.gamma}};
    if (f.train_refs) {
        const auto& refs = *f.train_refs;
        doc["metric"] = to_string(refs.metric);
        if (refs.slicing)
            doc["slicing"] = {{"L", refs.slicing->L}, {"seed", refs.slicing->seed}, {"dim", refs.slicing->dim}};
        nlohmann::json digests = nlohmann::json::array();
        for (const auto& mu : refs.measures)
            digests.push_back(hex_digest(mu.digest()));
        doc["training_digests"] = std::move(digests);
    }
    return doc;
}

GsirFit fit_from_json(const nlohmann::json& doc, std::vector<EmpiricalMeasure> training)
{
    if (doc.value("format", "") != "wgsir-fit")
        throw Error("fit json: not a wgsir fit document");
    const auto n = doc.at("n").get<std::size_t>();
    const auto d = doc.at("d").get<std::size_t>();
    const auto& digests = doc.at("training_digests");
    if (training.size() != n || digests.size() != n)
        throw Error("fit json: expected " + std::to_string(n) + " training measures, got " +
                    std::to_string(training.size()));
    for (std::size_t i = 0; i < n; ++i) {
        if (digests.at(i).get<std::string>() != hex_digest(training[i].digest()))
            throw Error("fit json: training measure " + std::to_string(i) + " does not match the stored digest");
    }

    GsirFit f;
    f.variant = parse_variant(doc.at("variant").get<std::string>());
    f.d = d;
    f.reg = {doc.at("eps_x").get<double>(), doc.at("eps_y").get<double>()};
    f.eta_x = doc.at("eta_x").get<double>();
    f.eta_y = doc.at("eta_y").get<double>();
    const auto ev = doc.at("eigenvalues").get<std::vector<double>>();
    f.eigenvalues = Eigen::Map<const Eigen::VectorXd>(ev.data(), static_cast<Eigen::Index>(ev.size()));
    f.coefficients = matrix_from_json(doc.at("coefficients"), static_cast<Eigen::Index>(d));

    auto refs = std::make_shared<TrainingReference>();
    refs->metric = parse_metric(doc.at("metric").get<std::string>());
    if (doc.contains("slicing")) {
        const auto& s = doc.at("slicing");
        refs->slicing = SlicingSpec{s.at("L").get<std::size_t>(), s.at("seed").get<std::uint64_t>(),
                                    s.at("dim").get<std::size_t>()};
    }
    refs->measures = std::move(training);

    f.train_gram.spec.family = parse_kernel_family(doc.at("kernel").at("family").get<std::string>());
    f.train_gram.spec.gamma = doc.at("kernel").at("gamma").get<double>();
    const DistanceMatrix dist = pairwise_matrix(refs->measures, refs->metric, refs->slicing);
    f.train_gram.K = kernel_values(dist.values, f.train_gram.spec);
    f.train_gram.G = center_gram(f.train_gram.K);
    f.train_gram.lambda_max = max_eigenvalue(f.train_gram.G);
    const Eigen::MatrixXd qc = f.coefficients.rowwise() - f.coefficients.colwise().mean();
    f.train_offset = (f.train_gram.K * qc).colwise().mean();
    f.train_refs = std::move(refs);
    return f;
}

void save_fit(const std::filesystem::path& path, const GsirFit& f)
{
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write " + path.string());
    out << std::setprecision(17) << fit_to_json(f).dump(2) << '\n';
}

GsirFit load_fit(const std::filesystem::path& path, std::vector<EmpiricalMeasure> training)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw Error("fit json: " + std::string(e.what()));
    }
    return fit_from_json(doc, std::move(training));
}

} // namespace wgsir
