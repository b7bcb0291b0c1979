#pragma once

/// Seeded randomness utilities. All simulation randomness flows from a single
/// master seed; per-trial / per-branch engines are derived with splitmix64 so
/// that runs are reproducible regardless of scheduling.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace sce {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derive an independent engine for stream `stream` of a master seed.
inline std::mt19937_64 derive_rng(std::uint64_t master_seed, std::uint64_t stream) {
    return std::mt19937_64(splitmix64(master_seed ^ splitmix64(stream)));
}

/// Uniform double in [0,1). Explicit construction, no std::distribution,
/// so the byte stream is fixed by the engine alone.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, n).
inline std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n) {
    // Rejection from the top to avoid modulo bias.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

/// Standard real Gaussian via Box-Muller.
inline double gaussian(std::mt19937_64& rng) {
    double u1;
    do {
        u1 = uniform01(rng);
    } while (u1 <= 0.0);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

/// Circularly-symmetric complex Gaussian with E|z|^2 = 1.
inline std::complex<double> complex_gaussian(std::mt19937_64& rng) {
    const double re = gaussian(rng);
    const double im = gaussian(rng);
    return {re * M_SQRT1_2, im * M_SQRT1_2};
}

}  // namespace sce
