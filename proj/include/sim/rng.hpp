#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace sim {

/// SplitMix64 finalizer. Used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed of stream `stream` under `master`: splitmix64(splitmix64(master) ^ stream).
/// Trial t of a multi-trial evaluation uses stream t.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept;

/// Portable random source. The engine is mt19937_64 (fully specified by the
/// standard); the distributions below are implemented here rather than taken
/// from <random>, whose distribution algorithms differ between libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, n) by rejection sampling. n must be > 0.
    std::uint64_t uniform_below(std::uint64_t n);

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01();

    /// Standard normal via the Marsaglia polar method.
    double normal();

    /// `k` distinct values from [0, n) in selection order (partial Fisher-Yates).
    std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace sim
