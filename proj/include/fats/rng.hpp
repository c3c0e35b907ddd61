#pragma once
// Seeded randomness with named sub-stream derivation. Every stream is a
// pure function of (root seed, tag path), so replays are exact and sibling
// streams stay isolated no matter how much each one is consumed.

#include <cstdint>
#include <random>

namespace fats {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed) { return seed; }

template <typename... Rest>
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag, Rest... rest) {
    return mix_seed(splitmix64(seed ^ splitmix64(tag + 0x632be59bd9b4e019ULL)), rest...);
}

class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

    std::uint64_t seed() const { return seed_; }
    std::mt19937_64& engine() { return engine_; }

    // Child stream identified by a tag path; independent of draws taken here.
    template <typename... Tags>
    RandomSource derive(Tags... tags) const {
        return RandomSource(mix_seed(seed_, static_cast<std::uint64_t>(tags)...));
    }

    double uniform01() {
        return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
    }

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(engine_);
    }

    // Uniform draw from [0, n); n must be positive.
    std::uint64_t uniform_index(std::uint64_t n) {
        return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
    }

    bool bernoulli(double p) { return uniform01() < p; }

    double exponential(double mean) {
        return std::exponential_distribution<double>(1.0 / mean)(engine_);
    }

    double gamma(double shape) {
        return std::gamma_distribution<double>(shape, 1.0)(engine_);
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

// One draw from Beta(alpha, beta) via the two-gamma construction.
inline double sample_beta(double alpha, double beta, RandomSource& rng) {
    const double a = rng.gamma(alpha);
    const double b = rng.gamma(beta);
    const double total = a + b;
    if (total <= 0.0) return 0.5;
    return a / total;
}

}  // namespace fats
