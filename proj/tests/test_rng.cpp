#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "ph/rng.hpp"

TEST_CASE("equal keys give bit-identical streams") {
    ph::RngStream a(12345), b(12345);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different stream paths diverge") {
    ph::RngStream a(ph::derive(7, 1)), b(ph::derive(7, 2));
    size_t equal = 0;
    for (int i = 0; i < 256; ++i)
        if (a.next_u64() == b.next_u64()) ++equal;
    CHECK(equal == 0);
}

TEST_CASE("derive is sensitive to every argument") {
    std::set<uint64_t> keys;
    for (uint64_t seed : {1ull, 2ull})
        for (uint64_t tag : {1ull, 2ull, 3ull})
            for (uint64_t idx : {0ull, 1ull, 7ull})
                keys.insert(ph::derive(ph::derive(seed, tag), idx));
    CHECK(keys.size() == 2u * 3u * 3u);
}

TEST_CASE("unit draws are uniform in [0,1)") {
    ph::RngStream rng(ph::derive(99, 0));
    const size_t n = 100000;
    double sum = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double u = rng.next_unit();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        sum += u;
    }
    const double mean = sum / static_cast<double>(n);
    const double se = (1.0 / std::sqrt(12.0)) / std::sqrt(static_cast<double>(n));
    CHECK(std::fabs(mean - 0.5) < 3.0 * se);
}

TEST_CASE("discrete sampling respects weights") {
    ph::RngStream rng(ph::derive(4, 4));
    const std::vector<double> weights{0.2, 0.5, 0.3};
    std::vector<size_t> counts(3, 0);
    const size_t n = 200000;
    for (size_t i = 0; i < n; ++i) ++counts[rng.next_discrete(weights)];
    for (size_t k = 0; k < 3; ++k) {
        const double p = weights[k];
        const double se = std::sqrt(p * (1 - p) / static_cast<double>(n));
        CHECK(std::fabs(static_cast<double>(counts[k]) / n - p) < 4.0 * se);
    }
}
