#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "test_util.hpp"
#include "wgsir/gsir.hpp"
#include "wgsir/linalg.hpp"
#include "wgsir/metrics.hpp"
#include "wgsir/simgen.hpp"

using namespace wgsir;

namespace {

GramMatrix gram_of(const std::vector<EmpiricalMeasure>& measures, Metric metric,
                   const std::optional<SlicingSpec>& slicing = std::nullopt)
{
    const auto d = pairwise_matrix(measures, metric, slicing);
    return gram_matrix(d, KernelSpec{KernelFamily::Gaussian, default_gamma(d)});
}

struct Problem
{
    std::vector<EmpiricalMeasure> x;
    std::vector<EmpiricalMeasure> y;
};

/// Y measures centred at a nonlinear function of the X means.
Problem toy_problem(std::uint64_t seed, std::size_t n)
{
    Rng rng(seed);
    Problem p;
    for (std::size_t i = 0; i < n; ++i) {
        const double shift = rng.normal();
        p.x.push_back(test::random_measure(rng, 20, 1, shift));
        p.y.push_back(test::random_measure(rng, 20, 1, std::sin(2.0 * shift)));
    }
    return p;
}

GsirFit fit_toy(const Problem& p, Variant variant, std::size_t d)
{
    auto refs = std::make_shared<TrainingReference>(TrainingReference{p.x, Metric::W2, std::nullopt});
    return fit(gram_of(p.x, Metric::W2), gram_of(p.y, Metric::W2), RegularizationSpec{1e-2, 1e-2}, variant, d,
               refs);
}

} // namespace

TEST_CASE("variant names")
{
    CHECK(parse_variant("gsir1") == Variant::Gsir1);
    CHECK(parse_variant("GSIR2") == Variant::Gsir2);
    CHECK(to_string(Variant::Gsir2) == "gsir2");
    CHECK_THROWS_AS(parse_variant("gsir3"), Error);
    CHECK_THROWS_AS((RegularizationSpec{0.0, 1.0}.validate()), Error);
}

TEST_CASE("Lambda assembly matches the straight-line oracle")
{
    Rng rng(77);
    for (std::size_t n : {3u, 5u}) {
        for (int trial = 0; trial < 5; ++trial) {
            const Eigen::MatrixXd gx = center_gram(test::random_psd(rng, n, n));
            const Eigen::MatrixXd gy = center_gram(test::random_psd(rng, n, 2));
            const double eta_x = 0.1 + rng.uniform(), eta_y = 0.05 + rng.uniform();
            for (auto variant : {Variant::Gsir1, Variant::Gsir2}) {
                const auto got = assemble_lambda(gx, gy, eta_x, eta_y, variant);
                const auto want = oracle::gsir_lambda(test::to_rows(gx), test::to_rows(gy), eta_x, eta_y,
                                                      variant == Variant::Gsir2);
                CHECK(test::max_abs_diff(want, got) <= 1e-10);
            }
        }
    }
}

TEST_CASE("zero response Gram gives a zero spectrum")
{
    const auto p = toy_problem(1, 6);
    GramMatrix gy = gram_of(p.y, Metric::W2);
    gy.G.setZero();
    const auto f = fit(gram_of(p.x, Metric::W2), gy, RegularizationSpec{}, Variant::Gsir1, 2);
    CHECK(f.eigenvalues.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("fit stores the full spectrum and ridge coefficients")
{
    const auto p = toy_problem(2, 30);
    const auto f = fit_toy(p, Variant::Gsir1, 3);
    CHECK(f.eigenvalues.size() == 30);
    CHECK(f.eigenvectors.cols() == 3);
    CHECK(f.eta_x == doctest::Approx(1e-2 * f.train_gram.lambda_max));
    for (Eigen::Index k = 1; k < f.eigenvalues.size(); ++k)
        CHECK(f.eigenvalues(k - 1) >= f.eigenvalues(k));
    CHECK(f.eigenvalues.minCoeff() >= -1e-8 * f.eigenvalues(0));
    const Eigen::MatrixXd vtv = f.eigenvectors.transpose() * f.eigenvectors;
    CHECK((vtv - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-9);

    const Eigen::MatrixXd expected = ridge_inverse_apply(f.train_gram.G, f.eta_x, f.eigenvectors);
    CHECK((f.coefficients - expected).cwiseAbs().maxCoeff() <= 1e-12);
    const Eigen::MatrixXd pred = predictors_insample(f);
    CHECK((pred - f.train_gram.G * expected).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(pred.colwise().mean().cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("fitting is deterministic")
{
    const auto p = toy_problem(3, 25);
    const auto a = fit_toy(p, Variant::Gsir2, 2);
    const auto b = fit_toy(p, Variant::Gsir2, 2);
    CHECK(a.eigenvalues == b.eigenvalues);
    CHECK(a.coefficients == b.coefficients);
    CHECK(a.train_offset == b.train_offset);
}

TEST_CASE("GSIR2 spectrum lies in [0, 1]")
{
    const auto p = toy_problem(4, 40);
    const auto f = fit_toy(p, Variant::Gsir2, 1);
    CHECK(f.eigenvalues.maxCoeff() <= 1.0 + 1e-8);
    CHECK(f.eigenvalues.minCoeff() >= -1e-8);
}

TEST_CASE("out-of-sample evaluation reproduces in-sample predictors")
{
    const auto p = toy_problem(5, 20);
    const auto f = fit_toy(p, Variant::Gsir1, 2);
    const Eigen::MatrixXd in = predictors_insample(f);
    const Eigen::MatrixXd out = predictors_outsample(f, p.x);
    CHECK((in - out).cwiseAbs().maxCoeff() <= 1e-8);

    const Eigen::MatrixXd one = predictors_outsample(f, {p.x[7]});
    REQUIRE(one.rows() == 1);
    CHECK((one.row(0) - in.row(7)).cwiseAbs().maxCoeff() <= 1e-8);

    const Eigen::MatrixXd none = predictors_outsample(f, {});
    CHECK(none.rows() == 0);
    CHECK(none.cols() == 2);

    CHECK_THROWS_AS(predictors_outsample(f, {EmpiricalMeasure({1, 2}, 2)}), Error);
    CHECK_THROWS_AS(predictors_from_distances(f, Eigen::MatrixXd::Zero(2, 3)), Error);
}

TEST_CASE("retain keeps the leading directions")
{
    const auto p = toy_problem(6, 15);
    const auto f = fit_toy(p, Variant::Gsir1, 3);
    const auto r = retain(f, 1);
    CHECK(r.d == 1);
    CHECK(r.coefficients == f.coefficients.leftCols(1));
    CHECK(r.eigenvalues == f.eigenvalues);
    CHECK((predictors_outsample(r, p.x) - predictors_insample(f).leftCols(1)).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK_THROWS_AS(retain(f, 4), Error);
    CHECK_THROWS_AS(retain(f, 0), Error);
}

TEST_CASE("permuting observations permutes predictor rows")
{
    const auto p = toy_problem(7, 20);
    std::vector<std::size_t> order(20);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(70);
    for (std::size_t i = order.size() - 1; i > 0; --i)
        std::swap(order[i], order[rng.next_u64() % (i + 1)]);
    Problem q;
    for (auto i : order) {
        q.x.push_back(p.x[i]);
        q.y.push_back(p.y[i]);
    }
    for (auto variant : {Variant::Gsir1, Variant::Gsir2}) {
        const auto a = fit_toy(p, variant, 2);
        const auto b = fit_toy(q, variant, 2);
        CHECK((a.eigenvalues - b.eigenvalues).cwiseAbs().maxCoeff() <= 1e-10);
        const Eigen::MatrixXd pa = predictors_insample(a);
        const Eigen::MatrixXd pb = predictors_insample(b);
        for (std::size_t r = 0; r < order.size(); ++r)
            for (Eigen::Index c = 0; c < 2; ++c)
                CHECK(std::abs(pb(r, c) - pa(order[r], c)) <= 1e-10);
    }
}

TEST_CASE("fit argument validation")
{
    const auto p = toy_problem(8, 6);
    const auto gx = gram_of(p.x, Metric::W2);
    const auto gy = gram_of(std::vector<EmpiricalMeasure>(p.y.begin(), p.y.begin() + 5), Metric::W2);
    CHECK_THROWS_AS(fit(gx, gy, RegularizationSpec{}, Variant::Gsir1, 1), Error);
    CHECK_THROWS_AS(fit(gx, gx, RegularizationSpec{}, Variant::Gsir1, 7), Error);
    CHECK_THROWS_AS(fit(gx, gx, RegularizationSpec{}, Variant::Gsir1, 0), Error);
}

TEST_CASE("JSON round trip preserves out-of-sample predictors")
{
    Rng rng(9);
    std::vector<EmpiricalMeasure> x = test::random_measures(rng, 12, 8, 2);
    std::vector<EmpiricalMeasure> y = test::random_measures(rng, 12, 8, 2);
    const SlicingSpec slicing{20, 5, 2};
    auto refs = std::make_shared<TrainingReference>(TrainingReference{x, Metric::SW2, slicing});
    const auto f = fit(gram_of(x, Metric::SW2, slicing), gram_of(y, Metric::SW2, slicing),
                       RegularizationSpec{1e-3, 1e-2}, Variant::Gsir2, 2, refs);

    test::TempDir dir;
    save_fit(dir.file("fit.json"), f);
    const auto g = load_fit(dir.file("fit.json"), x);
    CHECK(g.variant == Variant::Gsir2);
    CHECK(g.d == 2);
    const auto fresh = test::random_measures(rng, 4, 8, 2);
    CHECK((predictors_outsample(f, fresh) - predictors_outsample(g, fresh)).cwiseAbs().maxCoeff() <= 1e-12);

    auto tampered = x;
    tampered[3] = test::random_measure(rng, 8, 2);
    CHECK_THROWS_AS(load_fit(dir.file("fit.json"), tampered), Error);
    x.pop_back();
    CHECK_THROWS_AS(load_fit(dir.file("fit.json"), x), Error);
    CHECK_THROWS_AS(fit_from_json(nlohmann::json{{"format", "other"}}, {}), Error);
}

TEST_CASE("paired data beats permuted data on the leading eigenvalue")
{
    Rng rng = Rng::stream(31, 0);
    const auto gen = generate(SimScenario{ScenarioId::I1, 100, 50, 31}, rng);
    const auto gx = gram_of(gen.data.predictors, Metric::W2);
    const auto gy = gram_of(gen.data.responses, Metric::W2);
    const RegularizationSpec reg{1e-2, 1e-2};
    const double paired = fit(gx, gy, reg, Variant::Gsir1, 1).eigenvalues(0);

    std::vector<double> permuted;
    std::vector<Eigen::Index> idx(100);
    std::iota(idx.begin(), idx.end(), 0);
    for (int rep = 0; rep < 20; ++rep) {
        for (std::size_t i = idx.size() - 1; i > 0; --i)
            std::swap(idx[i], idx[rng.next_u64() % (i + 1)]);
        Eigen::PermutationMatrix<Eigen::Dynamic> p(100);
        for (Eigen::Index i = 0; i < 100; ++i)
            p.indices()(i) = static_cast<int>(idx[i]);
        GramMatrix shuffled = gy;
        shuffled.K = p.transpose() * gy.K * p;
        shuffled.G = p.transpose() * gy.G * p;
        permuted.push_back(fit(gx, shuffled, reg, Variant::Gsir1, 1).eigenvalues(0));
    }
    std::sort(permuted.begin(), permuted.end());
    // 95th percentile of 20 values: the 19th order statistic.
    CHECK(paired > permuted[18]);
}

TEST_CASE("two-dimensional fit recovers Model I-2 predictors in sample")
{
    Rng rng = Rng::stream(5, 0);
    const auto gen = generate(SimScenario{ScenarioId::I2, 100, 50, 5}, rng);
    const auto gx = gram_of(gen.data.predictors, Metric::W2);
    const auto gy = gram_of(gen.data.responses, Metric::W2);
    const auto f = fit(gx, gy, RegularizationSpec{1e-2, 1e-2}, Variant::Gsir1, 2);
    CHECK(rvmr(predictors_insample(f), gen.true_predictors).value > 0.4);
}
