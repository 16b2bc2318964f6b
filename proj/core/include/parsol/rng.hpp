#pragma once

// Deterministic RNG. splitmix64 rather than std::mt19937 + distributions:
// the standard distributions are implementation-defined, and map outputs
// must be byte-identical across compilers and across serial/parallel runs.

#include <cstdint>

namespace parsol {

struct SplitMix64 {
    uint64_t state;

    explicit SplitMix64(uint64_t seed) : state(seed) {}

    uint64_t next_u64() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }
};

// Stable per-cell seed so hemisphere sampling is independent of iteration
// order (parallel and serial runs agree bit for bit).
inline uint64_t cell_seed(uint64_t global_seed, uint64_t row, uint64_t col) {
    SplitMix64 mix(global_seed ^ (row * 0x9e3779b97f4a7c15ULL) ^ (col + 0x632be59bd9b4e019ULL));
    mix.next_u64();
    return mix.next_u64();
}

} // namespace parsol
