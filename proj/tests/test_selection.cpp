#include <doctest.h>

#include <cmath>

#include "test_util.hpp"
#include "wgsir/linalg.hpp"
#include "wgsir/selection.hpp"

using namespace wgsir;

TEST_CASE("GCV hand examples")
{
    Rng rng(1);
    const Eigen::MatrixXd kx = test::random_psd(rng, 4, 4);
    CHECK(gcv(kx, Eigen::MatrixXd::Zero(4, 4), 0.1) == 0.0);

    const Eigen::MatrixXd two = Eigen::MatrixXd::Constant(1, 1, 2.0);
    const Eigen::MatrixXd one = Eigen::MatrixXd::Constant(1, 1, 1.0);
    CHECK(gcv(two, one, 1.0) == doctest::Approx(1.0).epsilon(1e-14));

    CHECK_THROWS_AS(gcv(kx, kx, 0.0), Error);
    CHECK_THROWS_AS(gcv(Eigen::MatrixXd::Zero(3, 3), kx.topLeftCorner(3, 3), 0.1), Error);
    CHECK_THROWS_AS(gcv(kx, Eigen::MatrixXd::Zero(3, 3), 0.1), Error);
}

TEST_CASE("GCV matches the elementwise oracle")
{
    Rng rng(2);
    for (int trial = 0; trial < 10; ++trial) {
        const Eigen::MatrixXd kx = test::random_psd(rng, 5, 3);
        const Eigen::MatrixXd ky = test::random_psd(rng, 5, 5);
        for (double eps : kDefaultEpsilonGrid) {
            const double want = oracle::gcv(test::to_rows(kx), test::to_rows(ky), eps, max_eigenvalue(kx));
            CHECK(std::abs(gcv(kx, ky, eps) - want) <= 1e-10 * std::max(1.0, std::abs(want)));
        }
    }
}

TEST_CASE("GCV is continuous in eps")
{
    Rng rng(3);
    const Eigen::MatrixXd kx = test::random_psd(rng, 6, 6);
    const Eigen::MatrixXd ky = test::random_psd(rng, 6, 6);
    for (double eps : {1e-4, 1e-2, 0.5}) {
        const double a = gcv(kx, ky, eps);
        const double b = gcv(kx, ky, eps * (1.0 + 1e-7));
        CHECK(std::abs(a - b) <= 1e-5 * std::abs(a));
    }
}

TEST_CASE("epsilon selection tie and monotone cases")
{
    Rng rng(4);
    const Eigen::MatrixXd kx = test::random_psd(rng, 5, 5);
    CHECK(gcv_argmin(kx, Eigen::MatrixXd::Zero(5, 5), kDefaultEpsilonGrid) == 1e-6);
    // A constant response kernel leaves nothing to tune on the response side.
    CHECK_THROWS_AS(select_epsilon(kx, Eigen::MatrixXd::Zero(5, 5)), Error);

    // Ky = Kx: the residual grows with the ridge, so the criterion increases on the grid.
    const Eigen::MatrixXd full = test::random_psd(rng, 5, 40);
    std::vector<double> scores;
    for (double eps : kDefaultEpsilonGrid)
        scores.push_back(gcv(full, full, eps));
    CHECK(std::is_sorted(scores.begin(), scores.end()));
    CHECK(select_epsilon(full, full).eps_x == 1e-6);

    // Grid order does not matter.
    const std::vector<double> reversed(kDefaultEpsilonGrid.rbegin(), kDefaultEpsilonGrid.rend());
    CHECK(select_epsilon(full, full, reversed).eps_x == 1e-6);
    CHECK_THROWS_AS(select_epsilon(kx, kx, std::vector<double>{}), Error);
    CHECK_THROWS_AS(select_epsilon(Eigen::MatrixXd::Zero(5, 5), kx), Error);
}

TEST_CASE("BIC-type order hand examples")
{
    Eigen::VectorXd lambda(3);
    lambda << 0.9, 0.05, 0.01;
    const auto two = bic_order(lambda, 100, 2.0);
    CHECK(two.d_hat == 1);
    REQUIRE(two.scores.size() == 4);
    CHECK(two.scores[0] == 0.0);
    const double step = 2.0 * 0.9 * std::log(100.0) / 10.0;
    CHECK(step == doctest::Approx(0.8289).epsilon(1e-4));
    CHECK(two.scores[1] == doctest::Approx(0.9 - step).epsilon(1e-14));
    CHECK(two.scores[1] == doctest::Approx(0.0711).epsilon(1e-3));
    CHECK(two.scores[2] < 0.0);
    CHECK(bic_order(lambda, 100, 4.0).d_hat == 0);
    CHECK(bic_order(Eigen::VectorXd::Zero(5), 100, 2.0).d_hat == 0);
    CHECK(bic_order(lambda, 100, 2.0, 1).scores.size() == 2);
    CHECK(bic_penalty_constant(Variant::Gsir1) == 2.0);
    CHECK(bic_penalty_constant(Variant::Gsir2) == 4.0);
}

TEST_CASE("order selection is scale invariant and monotone in the penalty")
{
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        Eigen::VectorXd lambda(8);
        for (auto& v : lambda)
            v = std::pow(rng.uniform(), 4.0);
        std::sort(lambda.data(), lambda.data() + lambda.size(), std::greater<>());
        const std::size_t n = 20 + trial * 5;
        const auto base = bic_order(lambda, n, 2.0).d_hat;
        CHECK(bic_order(3.7 * lambda, n, 2.0).d_hat == base);
        std::size_t previous = bic_order(lambda, n, 0.1).d_hat;
        for (double c0 : {0.5, 1.0, 2.0, 4.0, 8.0}) {
            const auto d = bic_order(lambda, n, c0).d_hat;
            CHECK(d <= previous);
            previous = d;
        }
    }
}

TEST_CASE("order selection tolerates round-off negatives only")
{
    Eigen::VectorXd lambda(3);
    lambda << 0.5, 1e-3, -1e-10;
    CHECK_NOTHROW(bic_order(lambda, 50, 2.0));
    lambda(0) = -1.0;
    CHECK_THROWS_AS(bic_order(lambda, 50, 2.0), Error);
    CHECK_THROWS_AS(bic_order(Eigen::VectorXd::Ones(2), 1, 2.0), Error);
}
