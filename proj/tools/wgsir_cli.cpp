// Command-line front end: synthetic benchmarks (`run`), estimation on
// observed distributions (`fit`), out-of-sample evaluation of a saved fit
// (`predict`), and export of simulated data (`generate`).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <omp.h>

#include "wgsir/gsir.hpp"
#include "wgsir/harness.hpp"

namespace {

using namespace wgsir;

struct Flags
{
    std::string config;
    std::string scenario;
    std::string variant;
    std::string kernel;
    std::string metric;
    std::string x;
    std::string y;
    std::string out;
    std::string model_out;
    std::size_t n = 0;
    std::size_t m = 0;
    std::size_t L = 0;
    std::size_t reps = 0;
    std::uint64_t seed = 0;
    std::size_t d = 0;
    int threads = 0;
    std::vector<double> eps_grid;
    bool timing = false;
};

void add_common(CLI::App& cmd, Flags& f)
{
    cmd.add_option("--config", f.config, "JSON config file; flags override its values");
    cmd.add_option("--variant", f.variant, "gsir1 or gsir2");
    cmd.add_option("--kernel", f.kernel, "gaussian or laplacian");
    cmd.add_option("--L", f.L, "number of slicing directions");
    cmd.add_option("--seed", f.seed, "RNG seed");
    cmd.add_option("--d", f.d, "fixed dimension (default: BIC-type selection)");
    cmd.add_option("--eps-grid", f.eps_grid, "ridge grid for GCV")->delimiter(',');
    cmd.add_option("--out", f.out, "output CSV path (default: stdout)");
    cmd.add_option("--threads", f.threads, "OpenMP threads");
}

ExperimentConfig resolve(const CLI::App& cmd, const Flags& f)
{
    ExperimentConfig cfg;
    if (!f.config.empty())
        cfg = load_config(f.config, cfg);
    auto given = [&cmd](const char* name) {
        const auto* opt = cmd.get_option_no_throw(name);
        return opt != nullptr && opt->count() > 0;
    };
    if (given("--scenario"))
        cfg.scenario = parse_scenario(f.scenario);
    if (given("--variant"))
        cfg.variant = parse_variant(f.variant);
    if (given("--kernel"))
        cfg.kernel = parse_kernel_family(f.kernel);
    if (given("--metric"))
        cfg.metric = parse_metric(f.metric);
    if (given("--x"))
        cfg.x_path = f.x;
    if (given("--y"))
        cfg.y_path = f.y;
    if (given("--out"))
        cfg.out = f.out;
    if (given("--save-model"))
        cfg.model_out = f.model_out;
    if (given("--n"))
        cfg.n = f.n;
    if (given("--m"))
        cfg.m = f.m;
    if (given("--L"))
        cfg.L = f.L;
    if (given("--reps"))
        cfg.replications = f.reps;
    if (given("--seed"))
        cfg.seed = f.seed;
    if (given("--d"))
        cfg.d = f.d;
    if (given("--eps-grid"))
        cfg.eps_grid = f.eps_grid;
    if (given("--timing"))
        cfg.timing = f.timing;
    if (given("--threads"))
        cfg.threads = f.threads;
    if (cfg.threads > 0)
        omp_set_num_threads(cfg.threads);
    return cfg;
}

template <typename Writer>
void emit(const std::filesystem::path& path, Writer&& write)
{
    if (path.empty()) {
        write(std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write " + path.string());
    write(out);
}

/// `id,<prefix>1..` header, then one row per id at full precision.
void write_rows(std::ostream& os, const std::vector<std::string>& ids, const Eigen::MatrixXd& values,
                const std::string& prefix)
{
    os << "id";
    for (Eigen::Index j = 0; j < values.cols(); ++j)
        os << ',' << prefix << (j + 1);
    os << '\n';
    char buf[32];
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
        os << ids[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < values.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", values(i, j));
            os << ',' << buf;
        }
        os << '\n';
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Nonlinear sufficient dimension reduction for distribution-on-distribution regression"};
    app.require_subcommand(1);

    Flags run_flags;
    auto* run = app.add_subcommand("run", "replicated synthetic benchmark");
    add_common(*run, run_flags);
    run->add_option("--scenario", run_flags.scenario, "I-1..I-4, II-1..II-4");
    run->add_option("--n", run_flags.n, "training size (2n observations are generated)");
    run->add_option("--m", run_flags.m, "sample size per distribution");
    run->add_option("--reps", run_flags.reps, "replications");
    run->add_flag("--timing", run_flags.timing, "record wall time per replication");

    Flags fit_flags;
    auto* fitcmd = app.add_subcommand("fit", "estimate sufficient predictors from observed distributions");
    add_common(*fitcmd, fit_flags);
    fitcmd->add_option("--x", fit_flags.x, "predictor measures CSV (id,v1[,v2...])");
    fitcmd->add_option("--y", fit_flags.y, "response measures CSV");
    fitcmd->add_option("--metric", fit_flags.metric, "w2 or sw2");
    fitcmd->add_option("--save-model", fit_flags.model_out, "write the fitted model as JSON");

    std::string model_path, train_x, new_x, predict_out;
    auto* predict = app.add_subcommand("predict", "evaluate a saved fit on new predictor measures");
    predict->add_option("--model", model_path, "model JSON from `fit --save-model`")->required();
    predict->add_option("--train-x", train_x, "predictor CSV the model was trained on")->required();
    predict->add_option("--x", new_x, "new predictor measures CSV")->required();
    predict->add_option("--out", predict_out, "output CSV path (default: stdout)");

    std::string gen_scenario, gen_x, gen_y, gen_truth;
    std::size_t gen_n = 100, gen_m = 50;
    std::uint64_t gen_seed = 7;
    auto* gen = app.add_subcommand("generate", "write a simulated dataset as measure CSVs");
    gen->add_option("--scenario", gen_scenario, "I-1..I-4, II-1..II-4")->required();
    gen->add_option("--n", gen_n, "number of observations");
    gen->add_option("--m", gen_m, "sample size per distribution");
    gen->add_option("--seed", gen_seed, "RNG seed");
    gen->add_option("--x-out", gen_x, "predictor CSV")->required();
    gen->add_option("--y-out", gen_y, "response CSV")->required();
    gen->add_option("--truth-out", gen_truth, "true predictors CSV");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            const ExperimentConfig cfg = resolve(*run, run_flags);
            const ExperimentResult result = run_experiment(cfg);
            emit(cfg.out, [&](std::ostream& os) { write_results_csv(os, result); });
            return result.rows.empty() ? 1 : 0;
        }
        if (*fitcmd) {
            const ExperimentConfig cfg = resolve(*fitcmd, fit_flags);
            const RealDataResult result = run_real_data(cfg);
            emit(cfg.out, [&](std::ostream& os) { write_predictors_csv(os, result); });
            if (!cfg.model_out.empty())
                save_fit(cfg.model_out, result.output.fit);
            return 0;
        }
        if (*predict) {
            const LabeledMeasures train = load_measures_csv(train_x);
            const LabeledMeasures fresh = load_measures_csv(new_x);
            const GsirFit model = load_fit(model_path, train.measures);
            const Eigen::MatrixXd values = predictors_outsample(model, fresh.measures);
            emit(predict_out, [&](std::ostream& os) { write_rows(os, fresh.ids, values, "sp"); });
            return 0;
        }
        if (*gen) {
            SimScenario scenario{parse_scenario(gen_scenario), gen_n, gen_m, gen_seed};
            Rng rng(gen_seed);
            const GeneratedData data = generate(scenario, rng);
            write_measures_csv(gen_x, data.data.ids, data.data.predictors);
            write_measures_csv(gen_y, data.data.ids, data.data.responses);
            if (!gen_truth.empty())
                emit(gen_truth, [&](std::ostream& os) { write_rows(os, data.data.ids, data.true_predictors, "t"); });
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "wgsir: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
