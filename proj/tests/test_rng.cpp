#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <vector>

#include "hsld/rng.hpp"
#include "oracle_helpers.hpp"

TEST_CASE("generator matches the reference stream") {
    for (const std::uint64_t seed : {0ull, 1ull, 42ull, 0xdeadbeefcafeull}) {
        hsld::Rng rng(seed);
        oracle::RefXoshiro256ss ref(seed);
        for (int i = 0; i < 1000; ++i) REQUIRE(rng.next() == ref.next());
    }
}

TEST_CASE("seed derivation is stable") {
    // Pinned values guard the documented derivation (splitmix64 finalizer over
    // base, tag hash, index) against accidental change.
    const auto expected = [](std::uint64_t base, std::string_view tag, std::uint64_t index) {
        auto fnv = [](std::string_view s) {
            std::uint64_t h = 0xcbf29ce484222325ULL;
            for (unsigned char c : s) {
                h ^= c;
                h *= 0x100000001b3ULL;
            }
            return h;
        };
        auto mix = [](std::uint64_t x) {
            x ^= x >> 30;
            x *= 0xbf58476d1ce4e5b9ULL;
            x ^= x >> 27;
            x *= 0x94d049bb133111ebULL;
            x ^= x >> 31;
            return x;
        };
        return mix(mix(mix(base + 0x9e3779b97f4a7c15ULL) ^ fnv(tag)) ^ index);
    };
    REQUIRE(hsld::derive_seed(7, "seqls", 0) == expected(7, "seqls", 0));
    REQUIRE(hsld::derive_seed(7, "seqls", 1) == expected(7, "seqls", 1));
    REQUIRE(hsld::derive_seed(7, "gibls-chain", 123) == expected(7, "gibls-chain", 123));
    REQUIRE(hsld::derive_seed(7, "seqls", 0) != hsld::derive_seed(7, "seqls", 1));
    REQUIRE(hsld::derive_seed(7, "seqls", 0) != hsld::derive_seed(8, "seqls", 0));
    REQUIRE(hsld::derive_seed(7, "seqls", 0) != hsld::derive_seed(7, "gibls", 0));
}

TEST_CASE("bounded draws stay in range and look uniform") {
    hsld::Rng rng(99);
    std::vector<int> counts(7, 0);
    const int draws = 70000;
    for (int i = 0; i < draws; ++i) {
        const auto v = rng.below(7);
        REQUIRE(v < 7);
        ++counts[v];
    }
    for (const int c : counts) {  // ~6 sigma band around draws/7
        REQUIRE(c > 10000 - 600);
        REQUIRE(c < 10000 + 600);
    }
    for (int i = 0; i < 1000; ++i) {
        const auto v = rng.uniform_int(-3, 3);
        REQUIRE(v >= -3);
        REQUIRE(v <= 3);
    }
}

TEST_CASE("unit doubles and normals") {
    hsld::Rng rng(123);
    double sum = 0, sum2 = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.u01();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
        sum2 += u * u;
    }
    REQUIRE(std::abs(sum / n - 0.5) < 0.005);

    sum = sum2 = 0;
    double abs_sum = 0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        REQUIRE(std::isfinite(z));
        sum += z;
        sum2 += z * z;
        abs_sum += std::abs(z);
    }
    REQUIRE(std::abs(sum / n) < 0.01);
    REQUIRE(std::abs(sum2 / n - 1.0) < 0.02);
    // E|Z| = sqrt(2/pi)
    REQUIRE(std::abs(abs_sum / n - std::sqrt(2.0 / 3.14159265358979323846)) < 0.01);
}

TEST_CASE("streams with equal seeds are identical") {
    hsld::Rng a(555), b(555);
    for (int i = 0; i < 100; ++i) REQUIRE(a.next() == b.next());
}
