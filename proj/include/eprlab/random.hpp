#pragma once

#include <cstdint>
#include <random>

namespace eprlab {

/// Reproducible random stream keyed by (seed, stream index).
///
/// Algorithm: the 64-bit Mersenne Twister (std::mt19937_64), seeded with
/// splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x9e3779b97f4a7c15)).
/// Uniform doubles take the top 53 bits of one engine output, so the bit
/// pattern of every draw is fixed across standard libraries; normal deviates
/// use the Box-Muller transform (no cached second deviate).
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t stream = 0);

    /// Uniform in [0, 1).
    double uniform();
    /// Standard normal deviate.
    double normal();
    std::uint64_t next_u64() { return engine_(); }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

    /// Independent stream for sub-task `index` of this one.
    RandomStream derive(std::uint64_t index) const;

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace eprlab
