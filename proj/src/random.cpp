#include "wgsir/random.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "wgsir/error.hpp"

namespace wgsir {

Rng Rng::stream(std::uint64_t seed, std::uint64_t stream, std::uint64_t purpose)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                      static_cast<std::uint32_t>(purpose)};
    std::uint64_t words[2];
    std::uint32_t raw[4];
    seq.generate(raw, raw + 4);
    words[0] = (static_cast<std::uint64_t>(raw[0]) << 32) | raw[1];
    words[1] = (static_cast<std::uint64_t>(raw[2]) << 32) | raw[3];
    return Rng(words[0] ^ (words[1] * 0x9E3779B97F4A7C15ULL));
}

double Rng::normal()
{
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * factor;
    has_spare_ = true;
    return u * factor;
}

double Rng::exponential(double rate)
{
    return -std::log(uniform_open()) / rate;
}

namespace {

// log of a Gamma(shape, 1) draw; log space keeps tiny shapes from underflowing.
double log_gamma_unit(double shape, Rng& rng)
{
    if (shape == 2.0)
        return std::log(-std::log(rng.uniform_open()) - std::log(rng.uniform_open()));
    double boost = 0.0;
    if (shape < 1.0) {
        boost = std::log(rng.uniform_open()) / shape;
        shape += 1.0;
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    while (true) {
        double x, v;
        do {
            x = rng.normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform_open();
        if (u < 1.0 - 0.0331 * x * x * x * x || std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
            return std::log(d * v) + boost;
    }
}

void check_gamma_params(double shape, double rate)
{
    if (!(shape > 0.0) || !(rate > 0.0) || !std::isfinite(shape) || !std::isfinite(rate))
        throw Error("gamma: shape and rate must be positive and finite (shape=" + std::to_string(shape) +
                    ", rate=" + std::to_string(rate) + ")");
}

} // namespace

double sample_gamma(double shape, double rate, Rng& rng)
{
    check_gamma_params(shape, rate);
    return std::exp(log_gamma_unit(shape, rng)) / rate;
}

double sample_truncated_gamma(double shape, double rate, double lo, double hi, Rng& rng)
{
    check_gamma_params(shape, rate);
    if (!(lo >= 0.0) || !(lo < hi))
        throw Error("truncated gamma: need 0 <= lo < hi");
    constexpr int max_proposals = 1'000'000;
    for (int k = 0; k < max_proposals; ++k) {
        const double x = sample_gamma(shape, rate, rng);
        if (x > lo && x < hi)
            return x;
    }
    throw Error("truncated gamma: no draw accepted in (" + std::to_string(lo) + ", " + std::to_string(hi) +
                ") after 1e6 proposals (shape=" + std::to_string(shape) + ", rate=" + std::to_string(rate) + ")");
}

double sample_beta(double a, double b, Rng& rng)
{
    if (!(a > 0.0) || !(b > 0.0))
        throw Error("beta: parameters must be positive");
    const double la = log_gamma_unit(a, rng);
    const double lb = log_gamma_unit(b, rng);
    // x = 1 / (1 + exp(lb - la))
    double x = 1.0 / (1.0 + std::exp(lb - la));
    constexpr double tiny = std::numeric_limits<double>::denorm_min();
    if (x <= 0.0)
        x = tiny;
    if (x >= 1.0)
        x = std::nextafter(1.0, 0.0);
    return x;
}

} // namespace wgsir
