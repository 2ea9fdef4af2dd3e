#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace groupfair {

// Stream purposes used by the simulation harness. Keeping instance generation,
// slate draws, reward noise and policy randomness on separate streams means two
// policies run against the same seed see identical instances and contexts.
namespace streams {
constexpr std::uint64_t kInstance = 1;
constexpr std::uint64_t kSlate = 2;
constexpr std::uint64_t kNoise = 3;
constexpr std::uint64_t kPolicy = 4;
} // namespace streams

/// Deterministic random stream keyed by (seed, trial, purpose).
///
/// Equal keys always produce the identical draw sequence; distinct keys give
/// statistically independent streams. All sampling goes through our own
/// conversions (not std distributions) so sequences are stable across
/// standard-library implementations.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t trial = 0, std::uint64_t purpose = 0) {
        std::seed_seq seq{
            static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
            static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32),
            static_cast<std::uint32_t>(purpose), static_cast<std::uint32_t>(purpose >> 32),
            0x9e3779b9u};
        engine_.seed(seq);
    }

    std::uint64_t raw() { return engine_(); }

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform01() {
        return static_cast<double>(raw() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    /// Uniform integer in [0, n). Rejection sampling, so no modulo bias.
    std::uint64_t uniform_index(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("uniform_index: n must be positive");
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n + 1) % n;
        std::uint64_t x = raw();
        while (x > limit) x = raw();
        return x % n;
    }

    /// Standard normal draw via Box-Muller (two uniforms per draw, no cached state).
    double normal01() {
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log1p(-u1));
        return r * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

private:
    std::mt19937_64 engine_;
};

} // namespace groupfair
