#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace infoplan {

/// SplitMix64 finalizer. Used to turn (seed, label, counter) tuples into
/// well-separated 64-bit stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// FNV-1a over the label bytes; stable across platforms and builds.
constexpr std::uint64_t label_hash(std::string_view label) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : label) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Derive a substream seed: splitmix64(splitmix64(seed ^ fnv1a(label)) + counter).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::string_view label,
                                    std::uint64_t counter = 0) noexcept {
    return splitmix64(splitmix64(seed ^ label_hash(label)) + counter);
}

/// Deterministic random stream. Wraps mt19937_64 but does its own uniform and
/// normal transforms, since the std distributions are not specified bit-for-bit
/// across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n); n must be positive. Unbiased (rejection).
    std::uint64_t index(std::uint64_t n);

    /// Standard normal via the Marsaglia polar method.
    double normal();
    double normal(double mean, double sd) { return mean + sd * normal(); }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace infoplan
