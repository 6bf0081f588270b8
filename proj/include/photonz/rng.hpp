#pragma once

#include <cmath>
#include <cstdint>

namespace photonz {

// SplitMix64 (Steele, Lea & Flood 2014). The state advances by a fixed odd
// increment and the output is a bijective hash of it, so a given seed
// reproduces the same stream bit-for-bit on every platform. All samplers in
// this library take an explicit seed and draw from one of these; callers that
// want independent streams derive them with stream().
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    // Decorrelated substream for (seed, stream_id).
    static SplitMix64 stream(std::uint64_t seed, std::uint64_t stream_id) {
        SplitMix64 g(seed ^ (0x9E3779B97F4A7C15ull * (stream_id + 1)));
        g.next_u64();
        return g;
    }

    std::uint64_t next_u64() {
        std::uint64_t x = (state_ += 0x9E3779B97F4A7C15ull);
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
        return x ^ (x >> 31);
    }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1]; safe to take logarithms of.
    double uniform_open01() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    // Standard normal via Box-Muller; generates a pair and caches the spare.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform_open01()));
        const double a = 6.283185307179586476925287 * uniform01();
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    // Exp(1).
    double exponential() { return -std::log(uniform_open01()); }

private:
    std::uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace photonz
