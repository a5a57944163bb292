// Serial reference vs OpenMP kernels. Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <vector>

#include "wgsir/metrics.hpp"
#include "wgsir/ot_distances.hpp"
#include "wgsir/random.hpp"
#include "wgsir/serial.hpp"

using namespace wgsir;

namespace {

std::vector<EmpiricalMeasure> make_measures(std::size_t n, std::size_t m, std::size_t dim)
{
    Rng rng(2024);
    std::vector<EmpiricalMeasure> out;
    for (std::size_t i = 0; i < n; ++i) {
        const double shift = 2.0 * rng.normal();
        std::vector<double> v(m * dim);
        for (auto& x : v)
            x = shift + rng.normal();
        out.emplace_back(std::move(v), dim);
    }
    return out;
}

Eigen::MatrixXd make_sample(std::size_t n, std::size_t dim, std::uint64_t seed)
{
    Rng rng(seed);
    Eigen::MatrixXd u(n, dim);
    for (Eigen::Index i = 0; i < u.size(); ++i)
        u.data()[i] = rng.normal();
    return u;
}

template <bool Parallel>
void pairwise_w2(benchmark::State& state)
{
    const auto measures = make_measures(state.range(0), 50, 1);
    for (auto _ : state) {
        auto d = Parallel ? pairwise_matrix(measures, Metric::W2) : serial::pairwise_matrix(measures, Metric::W2);
        benchmark::DoNotOptimize(d.values.data());
    }
}

template <bool Parallel>
void pairwise_sw2(benchmark::State& state)
{
    const auto measures = make_measures(state.range(0), 50, 2);
    const SlicingSpec slicing{50, 11, 2};
    for (auto _ : state) {
        auto d = Parallel ? pairwise_matrix(measures, Metric::SW2, slicing)
                          : serial::pairwise_matrix(measures, Metric::SW2, slicing);
        benchmark::DoNotOptimize(d.values.data());
    }
}

template <bool Parallel>
void ranks(benchmark::State& state)
{
    const Eigen::MatrixXd u = make_sample(state.range(0), 2, 3);
    for (auto _ : state) {
        Eigen::MatrixXd r = Parallel ? multivariate_ranks(u) : serial::multivariate_ranks(u);
        benchmark::DoNotOptimize(r.data());
    }
}

template <bool Parallel>
void dcor(benchmark::State& state)
{
    const Eigen::MatrixXd u = make_sample(state.range(0), 2, 4);
    const Eigen::MatrixXd v = make_sample(state.range(0), 2, 5);
    for (auto _ : state) {
        auto r = Parallel ? distance_correlation(u, v) : serial::distance_correlation(u, v);
        benchmark::DoNotOptimize(r.value);
    }
}

} // namespace

BENCHMARK(pairwise_w2<false>)->Name("pairwise_w2/serial")->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(pairwise_w2<true>)->Name("pairwise_w2/openmp")->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(pairwise_sw2<false>)->Name("pairwise_sw2/serial")->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(pairwise_sw2<true>)->Name("pairwise_sw2/openmp")->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(ranks<false>)->Name("ranks/serial")->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(ranks<true>)->Name("ranks/openmp")->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(dcor<false>)->Name("dcor/serial")->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(dcor<true>)->Name("dcor/openmp")->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
