#pragma once

#include <cstdint>

namespace pkcone {

/// splitmix64 stream. Self-contained so that seeded runs reproduce
/// bit-identically across platforms and standard-library versions
/// (std::normal_distribution has no such guarantee).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller (one value per call, stateless).
    double normal();

private:
    std::uint64_t state_;
};

/// Deterministic derivation of per-trial streams from (seed, labels...).
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace pkcone
