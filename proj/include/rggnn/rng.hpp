#ifndef RGGNN_RNG_HPP
#define RGGNN_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace rggnn {

/// splitmix64 step; used for seed mixing and derivation.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Derives a child seed from a master seed and a stream id.
/// seed_i = hash(master, id); stable across platforms and runs.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t id) {
    return splitmix64(splitmix64(master) ^ splitmix64(id * 0x9E3779B97F4A7C15ULL + 1));
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
    return derive_seed(derive_seed(master, a), b);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b,
                                 std::uint64_t c) {
    return derive_seed(derive_seed(master, a, b), c);
}

/// Deterministic RNG. Wraps mt19937_64 but implements all distributions
/// in-house, because the standard library's distribution outputs are
/// implementation-defined and the artifacts must be byte-reproducible.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

    /// Standard normal by Box-Muller. Consumes two uniforms per call.
    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    /// Unit-mean exponential (Rayleigh power fading).
    double exponential() {
        double u = uniform();
        return -std::log1p(-u);
    }

    bool bernoulli(double p) { return uniform() < p; }

    /// Uniform integer in [0, n). Modulo bias is irrelevant at our scales.
    std::uint64_t index(std::uint64_t n) { return gen_() % n; }

    std::uint64_t raw() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

} // namespace rggnn

#endif // RGGNN_RNG_HPP
