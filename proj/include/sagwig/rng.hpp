#pragma once

#include <cstdint>

namespace sagwig {

/// Counter-based random stream: the n-th output is a fixed avalanche mix of
/// (key + n * gamma), so any (seed, pixel) pair owns an independent stream
/// that can be sampled in any order, from any thread, with identical results.
struct CounterRng {
    std::uint64_t state;

    explicit CounterRng(std::uint64_t key) : state(key) {}

    std::uint64_t next_u64() {
        state += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
};

/// Stream key for pixel (i, j) under a run seed; collision-resistant mixing
/// so neighboring pixels decorrelate.
std::uint64_t stream_key(std::uint64_t seed, std::uint64_t i, std::uint64_t j);

/// Poisson draw with the given mean. Knuth's product method below mean 10,
/// Hormann's PTRS transformed rejection above — both consume only `rng`
/// uniforms, so results are identical across platforms and thread layouts.
/// Throws on negative mean.
long long poisson_sample(double mean, CounterRng& rng);

}  // namespace sagwig
