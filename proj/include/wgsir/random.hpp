#pragma once

#include <cstdint>
#include <random>

namespace wgsir {

/// Seeded 64-bit Mersenne Twister with hand-written variate generators.
///
/// The standard library's distribution objects are implementation-defined,
/// so every variate here is derived from raw engine output to keep results
/// identical across toolchains.
class Rng
{
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Independent stream for (seed, stream, purpose), e.g. one per replication.
    static Rng stream(std::uint64_t seed, std::uint64_t stream, std::uint64_t purpose = 0);

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on the open interval (0, 1).
    double uniform_open() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

    /// Standard normal via the Marsaglia polar method (the spare value is cached).
    double normal();
    double normal(double mean, double sd) { return mean + sd * normal(); }

    double exponential(double rate);

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// One Gamma(shape, rate) draw. Shape 2 uses a sum of two exponentials;
/// other shapes use Marsaglia-Tsang rejection (boosted for shape < 1).
double sample_gamma(double shape, double rate, Rng& rng);

/// Gamma(shape, rate) restricted to the open interval (lo, hi) by rejection.
/// Throws after 1e6 rejected proposals.
double sample_truncated_gamma(double shape, double rate, double lo, double hi, Rng& rng);

/// Beta(a, b) as G_a / (G_a + G_b), computed in log space and kept inside (0, 1).
double sample_beta(double a, double b, Rng& rng);

} // namespace wgsir
