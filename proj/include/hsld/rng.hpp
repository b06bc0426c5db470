#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace hsld {

// All randomness in this library flows through the generator below so that
// results are bit-reproducible across platforms and thread counts.  The
// standard <random> distributions are implementation-defined and deliberately
// avoided.

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// splitmix64 finalizer as a stand-alone 64-bit avalanche mix.
inline std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Stable per-sample seed derivation: an avalanche mix of (base seed, stream
// tag, sample index).  Identical on every platform, so work split across any
// number of threads lands on the same streams.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view tag, std::uint64_t index) {
    std::uint64_t h = mix64(base + 0x9e3779b97f4a7c15ULL);
    h = mix64(h ^ fnv1a64(tag));
    h = mix64(h ^ index);
    return h;
}

// xoshiro256** (Blackman & Vigna), state seeded by splitmix64 expansion.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64_next(sm);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Unbiased uniform integer in [0, n); Lemire multiply-shift with rejection.
    std::uint64_t below(std::uint64_t n) {
        unsigned __int128 m = (unsigned __int128)next() * n;
        auto lo = (std::uint64_t)m;
        if (lo < n) {
            const std::uint64_t t = (0 - n) % n;  // 2^64 mod n
            while (lo < t) {
                m = (unsigned __int128)next() * n;
                lo = (std::uint64_t)m;
            }
        }
        return (std::uint64_t)(m >> 64);
    }

    // Uniform integer in [lo, hi], both ends inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        return lo + (std::int64_t)below((std::uint64_t)(hi - lo) + 1);
    }

    // Uniform double in [0, 1), 53-bit resolution.
    double u01() { return (double)(next() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller; consumes exactly two uniforms, no cache.
    double normal() {
        const double u1 = 1.0 - u01();  // (0, 1], keeps log() finite
        const double u2 = u01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4];
};

}
