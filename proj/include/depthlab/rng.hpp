#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace depthlab {

std::uint64_t splitmix64(std::uint64_t x);

/// Deterministic random stream. The engine is std::mt19937_64 (bit-exact
/// across platforms by the standard); every distribution below is hand-rolled
/// from raw 64-bit draws so sampled values are reproducible byte-for-byte.
///
/// Concurrent tasks never share a stream: derive(seed, task_index) gives each
/// task its own stream through a splitmix64 counter scheme.
class RngStream {
  public:
    explicit RngStream(std::uint64_t raw_seed) : eng_(raw_seed) {}

    static RngStream derive(std::uint64_t seed, std::uint64_t stream_index) {
        std::uint64_t mixed = splitmix64(seed + 0x9e3779b97f4a7c15ULL * (stream_index + 1));
        return RngStream(splitmix64(mixed ^ 0xbf58476d1ce4e5b9ULL));
    }

    std::uint64_t next_raw() { return eng_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() { return (eng_() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    /// Standard normal via Box-Muller; the second value of each pair is cached.
    double normal();

    double exponential();

    /// Gamma(shape, 1) by Marsaglia-Tsang; requires shape >= 1.
    double gamma(double shape);

    double cauchy();

    /// Symmetric q-stable, q in [1, 2), by the Chambers-Mallows-Stuck
    /// construction; q == 1 reduces to Cauchy and q == 2 would be sqrt(2) *
    /// normal.
    double stable_symmetric(double q);

    /// Uniform direction on the unit sphere (normalized Gaussian vector).
    void unit_sphere(std::span<double> out);

  private:
    std::mt19937_64 eng_;
    bool have_cached_ = false;
    double cached_ = 0.0;
};

}  // namespace depthlab
