#include <doctest.h>

#include <cmath>
#include <vector>

#include "test_util.hpp"
#include "wgsir/ot_distances.hpp"
#include "wgsir/serial.hpp"

using namespace wgsir;

namespace {

EmpiricalMeasure uni(std::vector<double> v)
{
    return EmpiricalMeasure(std::move(v), 1);
}

Eigen::Matrix2d rotation(double angle)
{
    Eigen::Matrix2d r;
    r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    return r;
}

} // namespace

TEST_CASE("metric names")
{
    CHECK(parse_metric("w2") == Metric::W2);
    CHECK(parse_metric("SW2") == Metric::SW2);
    CHECK(to_string(Metric::SW2) == "SW2");
    CHECK_THROWS_AS(parse_metric("w1"), Error);
}

TEST_CASE("1-D W2 hand examples")
{
    CHECK(w2_empirical_1d(uni({0, 2}), uni({0, 2})) == 0.0);
    CHECK(w2_empirical_1d(uni({0, 1}), uni({1, 2})) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(w2_empirical_1d(uni({3, 0, 2, 1}), uni({0, 1, 2, 3})) == 0.0);
    CHECK(w2_empirical_1d(uni({0, 1}), uni({1, 2})) ==
          doctest::Approx(oracle::w2_assignment({{0}, {1}}, {{1}, {2}})).epsilon(1e-15));
    CHECK_THROWS_AS(w2_empirical_1d(EmpiricalMeasure({0, 1}, 2), uni({1})), Error);
}

TEST_CASE("1-D W2 matches the assignment oracle")
{
    Rng rng(101);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t m = 1 + trial % 6;
        const auto a = test::random_measure(rng, m, 1);
        const auto b = test::random_measure(rng, m, 1, rng.normal());
        CHECK(std::abs(w2_empirical_1d(a, b) - oracle::w2_assignment(test::points(a), test::points(b))) <= 1e-12);
    }
}

TEST_CASE("1-D W2 on unequal sizes uses the midpoint quantile grid")
{
    // Point mass against a two-point law: half the grid moves by 1.
    const double w = w2_empirical_1d(uni({0}), uni({0, 1}));
    CHECK(w == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    // Replicating every point leaves the law unchanged.
    CHECK(w2_empirical_1d(uni({0, 1, 5}), uni({0, 0, 1, 1, 5, 5})) == doctest::Approx(0.0).epsilon(1e-15));
    const double ab = w2_empirical_1d(uni({0.3, 1.1, -2}), uni({4, 1, 0.5, 0.2, 0.1}));
    const double ba = w2_empirical_1d(uni({4, 1, 0.5, 0.2, 0.1}), uni({0.3, 1.1, -2}));
    CHECK(ab == ba);
}

TEST_CASE("W2 metric axioms on random triples")
{
    Rng rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const auto a = test::random_measure(rng, 8, 1, rng.normal());
        const auto b = test::random_measure(rng, 8, 1, rng.normal());
        const auto c = test::random_measure(rng, 8, 1, rng.normal());
        const double ab = w2_empirical_1d(a, b);
        CHECK(ab == w2_empirical_1d(b, a));
        CHECK(ab >= 0.0);
        CHECK(ab <= w2_empirical_1d(a, c) + w2_empirical_1d(c, b) + 1e-9);
    }
}

TEST_CASE("slicing directions are unit vectors and seeded")
{
    const SlicingSpec spec{200, 42, 3};
    const auto dirs = spec.directions();
    REQUIRE(dirs.rows() == 3);
    REQUIRE(dirs.cols() == 200);
    for (Eigen::Index l = 0; l < dirs.cols(); ++l)
        CHECK(std::abs(dirs.col(l).norm() - 1.0) <= 1e-12);
    CHECK(dirs == spec.directions());
    CHECK(dirs != SlicingSpec{200, 43, 3}.directions());
    CHECK_THROWS_AS((SlicingSpec{0, 1, 2}.validate()), Error);
}

TEST_CASE("sliced W2 basic cases")
{
    Rng rng(5);
    const auto a = test::random_measure(rng, 10, 2);
    for (std::uint64_t seed : {1u, 2u, 3u})
        CHECK(sw2_empirical(a, a, SlicingSpec{50, seed, 2}) == 0.0);

    const auto x = uni({0.1, 3, -1});
    const auto y = uni({2, 2.5, 0});
    CHECK(sw2_empirical(x, y, SlicingSpec{50, 9, 1}) == w2_empirical_1d(x, y));

    const auto b = test::random_measure(rng, 10, 2, 1.0);
    const SlicingSpec spec{50, 77, 2};
    CHECK(sw2_empirical(a, b, spec) == sw2_empirical(b, a, spec));
    CHECK_THROWS_AS(sw2_empirical(a, x, spec), Error);
}

TEST_CASE("sliced W2 of two point masses converges to |v| / sqrt(2)")
{
    const EmpiricalMeasure a({0.0, 0.0}, 2);
    const EmpiricalMeasure b({1.0, 1.0}, 2);
    const auto est = sw2_empirical_detail(a, b, SlicingSpec{20000, 123, 2});
    CHECK(est.standard_error > 0.0);
    CHECK(std::abs(est.value - 1.0) <= 3.0 * est.standard_error);
}

TEST_CASE("sliced W2 never exceeds exact W2 beyond Monte-Carlo error")
{
    Rng rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t m = 2 + trial % 5;
        const auto a = test::random_measure(rng, m, 2);
        const auto b = test::random_measure(rng, m, 2, rng.normal());
        const auto est = sw2_empirical_detail(a, b, SlicingSpec{50, static_cast<std::uint64_t>(trial), 2});
        const double exact = oracle::w2_assignment(test::points(a), test::points(b));
        CHECK(est.value <= exact + 3.0 * est.standard_error + 1e-12);
    }
}

TEST_CASE("Gaussian W2 closed form")
{
    Eigen::VectorXd z = Eigen::VectorXd::Zero(1), three = Eigen::VectorXd::Constant(1, 3.0);
    Eigen::MatrixXd one = Eigen::MatrixXd::Identity(1, 1);
    CHECK(w2_gaussian(z, one, z, one) == doctest::Approx(0.0));
    CHECK(w2_gaussian(z, one, three, one) == doctest::Approx(3.0).epsilon(1e-14));

    Eigen::Vector2d m1(-1, 0), m2(0, 1);
    Eigen::Matrix2d s1 = Eigen::Vector2d(1, 0.5).asDiagonal(), s2 = Eigen::Vector2d(0.5, 1).asDiagonal();
    const double expected = std::sqrt(2.0 + 2.0 * std::pow(1.0 - std::sqrt(0.5), 2));
    CHECK(w2_gaussian(m1, s1, m2, s2) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(expected == doctest::Approx(1.47363).epsilon(1e-5));

    Eigen::Matrix2d bad;
    bad << 1, 0, 0, -1;
    CHECK_THROWS_AS(w2_gaussian(m1, bad, m2, s2), Error);
}

TEST_CASE("Gaussian W2 is invariant under a shared rotation")
{
    Rng rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Vector2d m1(rng.normal(), rng.normal()), m2(rng.normal(), rng.normal());
        const Eigen::MatrixXd s1 = test::random_psd(rng, 2, 3) + 0.1 * Eigen::MatrixXd::Identity(2, 2);
        const Eigen::MatrixXd s2 = test::random_psd(rng, 2, 3) + 0.1 * Eigen::MatrixXd::Identity(2, 2);
        const Eigen::Matrix2d r = rotation(rng.uniform() * 6.283185307179586);
        const double base = w2_gaussian(m1, s1, m2, s2);
        const double turned = w2_gaussian(r * m1, r * s1 * r.transpose(), r * m2, r * s2 * r.transpose());
        CHECK(std::abs(base - turned) <= 1e-10);
    }
}

TEST_CASE("Beta Hellinger closed form")
{
    CHECK(hellinger_beta(2, 3, 2, 3) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(std::abs(hellinger_beta(1, 1, 3, 1) - (1.0 - std::sqrt(3.0) / 2.0)) <= 1e-10);
    CHECK(hellinger_beta(1, 1, 3, 1) == doctest::Approx(0.13397).epsilon(1e-4));
    const double h = hellinger_beta(2, 1, 2, 3);
    CHECK(h > 0.0);
    CHECK(h < 1.0);
    CHECK(h == hellinger_beta(2, 3, 2, 1));
    CHECK(std::abs(h - oracle::hellinger_beta(2, 1, 2, 3)) <= 1e-10);
    CHECK(std::abs(hellinger_beta(1.5, 4, 3.2, 0.9) - oracle::hellinger_beta(1.5, 4, 3.2, 0.9)) <= 1e-8);
    CHECK_THROWS_AS(hellinger_beta(0, 1, 1, 1), Error);
}

TEST_CASE("Gaussian Hellinger closed form")
{
    Eigen::VectorXd z1 = Eigen::VectorXd::Zero(1), o1 = Eigen::VectorXd::Ones(1);
    Eigen::MatrixXd i1 = Eigen::MatrixXd::Identity(1, 1);
    CHECK(hellinger_gaussian_squared(z1, i1, z1, i1) == doctest::Approx(0.0));
    CHECK(std::abs(hellinger_gaussian_squared(z1, i1, o1, i1) - (1.0 - std::exp(-0.125))) <= 1e-12);

    Eigen::VectorXd z2 = Eigen::VectorXd::Zero(2);
    Eigen::MatrixXd i2 = Eigen::MatrixXd::Identity(2, 2);
    CHECK(std::abs(hellinger_gaussian_squared(z2, i2, z2, 4.0 * i2) - 0.2) <= 1e-10);
    CHECK(hellinger_gaussian(z2, i2, z2, 4.0 * i2) == doctest::Approx(std::sqrt(0.2)));
}

TEST_CASE("pairwise matrix structure")
{
    std::vector<EmpiricalMeasure> same(4, uni({1, 2, 3}));
    const auto zero = pairwise_matrix(same, Metric::W2);
    CHECK(zero.values.isZero(0.0));

    const std::vector<EmpiricalMeasure> three = {uni({0, 1}), uni({1, 2, 5}), uni({-3})};
    const auto d = pairwise_matrix(three, Metric::W2);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t k = 0; k < 3; ++k)
            CHECK(d.values(i, k) == w2_empirical_1d(three[i], three[k]));

    Rng rng(17);
    const auto biv = test::random_measures(rng, 10, 6, 2);
    const SlicingSpec spec{50, 99, 2};
    const auto s = pairwise_matrix(biv, Metric::SW2, spec);
    CHECK(s.values == s.values.transpose());
    CHECK(s.values.diagonal().isZero(0.0));
    CHECK((s.values.array() >= 0.0).all());
    for (std::size_t i = 0; i < 10; ++i)
        for (std::size_t k = 0; k < 10; ++k) {
            const auto est = sw2_empirical_detail(biv[i], biv[k], spec);
            CHECK(std::abs(s.values(i, k) - est.value) <= 1e-12);
            const double exact = oracle::w2_assignment(test::points(biv[i]), test::points(biv[k]));
            CHECK(s.values(i, k) <= exact + 3.0 * est.standard_error + 1e-12);
        }
    CHECK_THROWS_AS(pairwise_matrix(biv, Metric::W2), Error);
    CHECK_THROWS_AS(pairwise_matrix(biv, Metric::SW2), Error);
}

TEST_CASE("cross matrix agrees with the pairwise matrix")
{
    Rng rng(23);
    const auto biv = test::random_measures(rng, 6, 5, 2);
    const SlicingSpec spec{30, 4, 2};
    const auto full = pairwise_matrix(biv, Metric::SW2, spec);
    const std::vector<EmpiricalMeasure> rows(biv.begin(), biv.begin() + 2);
    const auto block = cross_matrix(rows, biv, Metric::SW2, spec);
    REQUIRE(block.rows() == 2);
    REQUIRE(block.cols() == 6);
    CHECK((block - full.values.topRows(2)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("distance matrix CSV dump")
{
    DistanceMatrix d{Eigen::MatrixXd::Zero(2, 2), Metric::W2};
    d.values(0, 1) = d.values(1, 0) = 0.5;
    test::TempDir dir;
    write_distance_csv(dir.file("d.csv"), d);
    const auto text = test::read_text(dir.file("d.csv"));
    CHECK(text.find("0.5") != std::string::npos);
    CHECK(std::count(text.begin(), text.end(), '\n') == 2);
}
