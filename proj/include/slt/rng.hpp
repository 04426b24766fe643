#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace slt {

// Deterministic random source. All distribution transforms are implemented
// here instead of <random>'s distribution classes, whose output is not
// pinned by the standard; this keeps seeded runs identical across
// compilers and standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform on [0, 1) with 53 random bits.
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * next_unit();
    }

    // Standard normal via Box-Muller; consumes two draws per call.
    double normal(double mean = 0.0, double stddev = 1.0) {
        const double u1 = 1.0 - next_unit(); // (0, 1]
        const double u2 = next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        return mean + stddev * r * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    // Unbiased integer in [0, n) by rejection.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % n;
    }

    bool bernoulli(double p) { return next_unit() < p; }

private:
    std::mt19937_64 gen_;
};

// SplitMix64 finalizer; used to derive independent sub-streams
// (data, init, algorithm, ...) from one run seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

namespace stream {
constexpr std::uint64_t data = 1;
constexpr std::uint64_t split = 2;
constexpr std::uint64_t init = 3;
constexpr std::uint64_t algo = 4;
constexpr std::uint64_t scores = 5;
} // namespace stream

} // namespace slt
