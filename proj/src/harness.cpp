#include "wgsir/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <unordered_map>
#include <unordered_set>

#include <omp.h>

#include "wgsir/metrics.hpp"

namespace wgsir {

namespace {

std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::optional<SlicingSpec> slicing_for(std::size_t dim, Metric metric, std::size_t L, std::uint64_t seed)
{
    if (dim < 2)
        return std::nullopt;
    if (metric == Metric::W2)
        throw Error("W2 is only available for univariate measures; use SW2 for dimension " + std::to_string(dim));
    return SlicingSpec{L, seed, dim};
}

} // namespace

void ExperimentConfig::validate_synthetic() const
{
    if (!scenario)
        throw Error("config: a scenario is required");
    if (replications < 1)
        throw Error("config: replications must be at least 1");
    if (n < 2 || m < 2)
        throw Error("config: n and m must be at least 2");
    if (L < 1)
        throw Error("config: L must be at least 1");
    if (d && (*d < 1 || *d > n))
        throw Error("config: d must lie in [1, n]");
}

void ExperimentConfig::validate_real() const
{
    if (x_path.empty() || y_path.empty())
        throw Error("config: real-data mode needs both predictor and response files");
    if (L < 1)
        throw Error("config: L must be at least 1");
}

ExperimentConfig config_from_json(const nlohmann::json& doc, ExperimentConfig cfg)
{
    if (!doc.is_object())
        throw Error("config: expected a JSON object");
    static const std::unordered_set<std::string> known = {
        "scenario", "x", "y", "n", "m", "L", "replications", "seed", "variant",
        "kernel", "metric", "eps_grid", "d", "out", "model_out", "timing", "threads"};
    for (const auto& item : doc.items())
        if (!known.contains(item.key()))
            throw Error("config: unknown key \"" + item.key() + "\"");
    try {
        if (doc.contains("scenario"))
            cfg.scenario = parse_scenario(doc.at("scenario").get<std::string>());
        if (doc.contains("x"))
            cfg.x_path = doc.at("x").get<std::string>();
        if (doc.contains("y"))
            cfg.y_path = doc.at("y").get<std::string>();
        if (doc.contains("n"))
            cfg.n = doc.at("n").get<std::size_t>();
        if (doc.contains("m"))
            cfg.m = doc.at("m").get<std::size_t>();
        if (doc.contains("L"))
            cfg.L = doc.at("L").get<std::size_t>();
        if (doc.contains("replications"))
            cfg.replications = doc.at("replications").get<std::size_t>();
        if (doc.contains("seed"))
            cfg.seed = doc.at("seed").get<std::uint64_t>();
        if (doc.contains("variant"))
            cfg.variant = parse_variant(doc.at("variant").get<std::string>());
        if (doc.contains("kernel"))
            cfg.kernel = parse_kernel_family(doc.at("kernel").get<std::string>());
        if (doc.contains("metric"))
            cfg.metric = parse_metric(doc.at("metric").get<std::string>());
        if (doc.contains("eps_grid"))
            cfg.eps_grid = doc.at("eps_grid").get<std::vector<double>>();
        if (doc.contains("d") && !doc.at("d").is_null())
            cfg.d = doc.at("d").get<std::size_t>();
        if (doc.contains("out"))
            cfg.out = doc.at("out").get<std::string>();
        if (doc.contains("model_out"))
            cfg.model_out = doc.at("model_out").get<std::string>();
        if (doc.contains("timing"))
            cfg.timing = doc.at("timing").get<bool>();
        if (doc.contains("threads"))
            cfg.threads = doc.at("threads").get<int>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("config: ") + e.what());
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base)
{
    std::ifstream in(path);
    if (!in)
        throw Error("config: cannot open " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw Error("config: " + std::string(e.what()));
    }
    return config_from_json(doc, std::move(base));
}

MetricSummary summarize(const std::vector<double>& values)
{
    MetricSummary s;
    if (values.empty())
        return s;
    double sum = 0.0;
    for (double v : values)
        sum += v;
    s.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values)
            ss += (v - s.mean) * (v - s.mean);
        const double sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
        s.standard_error = sd / std::sqrt(static_cast<double>(values.size()));
    }
    return s;
}

FitOutput fit_dataset(const DatasetPair& data, const FitOptions& options)
{
    data.validate();
    const std::size_t n = data.size();
    const std::size_t dim_x = common_dimension(data.predictors);
    const std::size_t dim_y = common_dimension(data.responses);

    auto refs = std::make_shared<TrainingReference>();
    refs->measures = data.predictors;
    refs->metric = options.metric;
    refs->slicing = slicing_for(dim_x, options.metric, options.L, options.slicing_seed);
    const auto slicing_y = slicing_for(dim_y, options.metric, options.L, options.slicing_seed);

    FitOutput out;
    out.dx = pairwise_matrix(data.predictors, options.metric, refs->slicing);
    out.dy = pairwise_matrix(data.responses, options.metric, slicing_y);

    const KernelSpec kx{options.kernel, default_gamma(out.dx)};
    const KernelSpec ky{options.kernel, default_gamma(out.dy)};
    const GramMatrix gx = gram_matrix(out.dx, kx);
    const GramMatrix gy = gram_matrix(out.dy, ky);

    out.eps = options.eps_grid.empty() ? select_epsilon(gx.K, gy.K)
                                       : select_epsilon(gx.K, gy.K, options.eps_grid);

    const GsirFit full = fit(gx, gy, {out.eps.eps_x, out.eps.eps_y}, options.variant, n, refs);
    out.order = bic_order(full.eigenvalues, n, bic_penalty_constant(options.variant));
    out.d_hat = options.d.value_or(out.order.d_hat);
    if (out.d_hat > n)
        throw Error("fit: requested dimension exceeds n");
    out.fit = retain(full, std::max<std::size_t>(out.d_hat, 1));
    return out;
}

GeneratedData replication_data(const ExperimentConfig& cfg, std::size_t replication)
{
    Rng rng = Rng::stream(cfg.seed, replication, 0);
    SimScenario scenario{*cfg.scenario, 2 * cfg.n, cfg.m, cfg.seed};
    return generate(scenario, rng);
}

std::uint64_t replication_slicing_seed(std::uint64_t seed, std::size_t replication)
{
    return Rng::stream(seed, replication, 1).next_u64();
}

ResultRow run_replication(const ExperimentConfig& cfg, std::size_t replication)
{
    cfg.validate_synthetic();
    const auto start = std::chrono::steady_clock::now();
    const GeneratedData gen = replication_data(cfg, replication);
    const std::size_t n = cfg.n;

    DatasetPair train;
    std::vector<EmpiricalMeasure> test_x;
    for (std::size_t i = 0; i < n; ++i) {
        train.predictors.push_back(gen.data.predictors[i]);
        train.responses.push_back(gen.data.responses[i]);
        test_x.push_back(gen.data.predictors[n + i]);
    }
    const Eigen::MatrixXd test_truth = gen.true_predictors.bottomRows(static_cast<Eigen::Index>(n));

    FitOptions options;
    options.variant = cfg.variant;
    options.kernel = cfg.kernel;
    options.metric = Metric::SW2;
    options.L = cfg.L;
    options.slicing_seed = replication_slicing_seed(cfg.seed, replication);
    options.eps_grid = cfg.eps_grid;
    options.d = cfg.d;
    const FitOutput fitted = fit_dataset(train, options);

    const Eigen::MatrixXd estimated = predictors_outsample(fitted.fit, test_x);

    ResultRow row;
    row.scenario = to_string(*cfg.scenario);
    row.variant = to_string(cfg.variant);
    row.n = cfg.n;
    row.m = cfg.m;
    row.replication = replication;
    row.rvmr = rvmr(estimated, test_truth).value;
    row.dcor = distance_correlation(estimated, test_truth).value;
    row.d_hat = fitted.d_hat;
    row.eps_x = fitted.eps.eps_x;
    row.eps_y = fitted.eps.eps_y;
    if (cfg.timing)
        row.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return row;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg)
{
    cfg.validate_synthetic();
    const auto reps = static_cast<std::ptrdiff_t>(cfg.replications);
    std::vector<std::optional<ResultRow>> slots(cfg.replications);
    std::vector<std::string> errors(cfg.replications);

    const int threads = cfg.threads > 0 ? cfg.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (std::ptrdiff_t r = 0; r < reps; ++r) {
        try {
            slots[r] = run_replication(cfg, static_cast<std::size_t>(r));
        } catch (const std::exception& e) {
            errors[r] = e.what();
        }
    }

    ExperimentResult result;
    std::vector<double> rv, dc;
    double d_sum = 0.0;
    for (std::size_t r = 0; r < cfg.replications; ++r) {
        if (slots[r]) {
            rv.push_back(slots[r]->rvmr);
            dc.push_back(slots[r]->dcor);
            d_sum += static_cast<double>(slots[r]->d_hat);
            result.rows.push_back(std::move(*slots[r]));
        } else {
            const std::string msg = "replication " + std::to_string(r) + ": " + errors[r];
            std::cerr << "wgsir: " << msg << '\n';
            result.failures.push_back(msg);
        }
    }
    result.summary.requested = cfg.replications;
    result.summary.completed = result.rows.size();
    result.summary.rvmr = summarize(rv);
    result.summary.dcor = summarize(dc);
    result.summary.d_hat_mean = rv.empty() ? 0.0 : d_sum / static_cast<double>(rv.size());
    return result;
}

void write_results_csv(std::ostream& out, const ExperimentResult& result)
{
    out << "scenario,variant,n,m,replication,rvmr,dcor,d_hat,eps_x,eps_y,wall_time_seconds\n";
    for (const auto& r : result.rows) {
        out << r.scenario << ',' << r.variant << ',' << r.n << ',' << r.m << ',' << r.replication << ','
            << format_double(r.rvmr) << ',' << format_double(r.dcor) << ',' << r.d_hat << ','
            << format_double(r.eps_x) << ',' << format_double(r.eps_y) << ','
            << (r.wall_time_seconds ? format_double(*r.wall_time_seconds) : std::string("NA")) << '\n';
    }
    const auto& s = result.summary;
    out << "# replications=" << s.requested << " completed=" << s.completed
        << " failures=" << (s.requested - s.completed) << '\n';
    out << "# rvmr_mean=" << format_double(s.rvmr.mean) << " rvmr_se=" << format_double(s.rvmr.standard_error)
        << '\n';
    out << "# dcor_mean=" << format_double(s.dcor.mean) << " dcor_se=" << format_double(s.dcor.standard_error)
        << '\n';
    out << "# d_hat_mean=" << format_double(s.d_hat_mean) << '\n';
}

DatasetPair pair_by_id(const LabeledMeasures& x, const LabeledMeasures& y)
{
    std::unordered_map<std::string, std::size_t> y_index;
    for (std::size_t k = 0; k < y.ids.size(); ++k)
        y_index.emplace(y.ids[k], k);
    std::unordered_set<std::string> x_ids(x.ids.begin(), x.ids.end());
    for (const auto& id : y.ids) {
        if (!x_ids.count(id))
            throw Error("response id '" + id + "' has no matching predictor observation");
    }
    DatasetPair out;
    for (std::size_t i = 0; i < x.ids.size(); ++i) {
        const auto it = y_index.find(x.ids[i]);
        if (it == y_index.end())
            throw Error("predictor id '" + x.ids[i] + "' has no matching response observation");
        out.ids.push_back(x.ids[i]);
        out.predictors.push_back(x.measures[i]);
        out.responses.push_back(y.measures[it->second]);
    }
    if (out.size() < 2)
        throw Error("real data: at least 2 observations are required");
    return out;
}

RealDataResult fit_real_data(const DatasetPair& data, const ExperimentConfig& cfg)
{
    FitOptions options;
    options.variant = cfg.variant;
    options.kernel = cfg.kernel;
    options.metric = cfg.metric;
    options.L = cfg.L;
    options.slicing_seed = replication_slicing_seed(cfg.seed, 0);
    options.eps_grid = cfg.eps_grid;
    options.d = cfg.d;

    RealDataResult result;
    result.ids = data.ids;
    result.output = fit_dataset(data, options);
    result.predictors =
        predictors_insample(result.output.fit).leftCols(static_cast<Eigen::Index>(result.output.d_hat));
    return result;
}

RealDataResult run_real_data(const ExperimentConfig& cfg)
{
    cfg.validate_real();
    const LabeledMeasures x = load_measures_csv(cfg.x_path);
    const LabeledMeasures y = load_measures_csv(cfg.y_path);
    return fit_real_data(pair_by_id(x, y), cfg);
}

void write_predictors_csv(std::ostream& out, const RealDataResult& result)
{
    const auto d = result.predictors.cols();
    out << "id";
    for (Eigen::Index j = 0; j < d; ++j)
        out << ",sp" << (j + 1);
    out << '\n';
    for (Eigen::Index i = 0; i < result.predictors.rows(); ++i) {
        out << result.ids[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < d; ++j)
            out << ',' << format_double(result.predictors(i, j));
        out << '\n';
    }
    const auto& o = result.output;
    out << "# d_hat=" << o.d_hat << " variant=" << to_string(o.fit.variant) << " eps_x=" << format_double(o.eps.eps_x)
        << " eps_y=" << format_double(o.eps.eps_y) << '\n';
    out << "# eigenvalues";
    for (Eigen::Index k = 0; k < o.fit.eigenvalues.size(); ++k)
        out << ',' << format_double(o.fit.eigenvalues(k));
    out << '\n';
}

} // namespace wgsir
