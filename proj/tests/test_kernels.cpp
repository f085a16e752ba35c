#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <vector>

#include "ph/kernels.hpp"
#include "ph/rng.hpp"

namespace {

struct Input {
    std::vector<double> planes;
    std::vector<double> q;
    size_t n, p;
};

Input random_input(uint64_t seed, size_t n, size_t p) {
    ph::RngStream rng(ph::derive(seed, 17));
    Input in;
    in.n = n;
    in.p = p;
    in.planes.resize(n * p);
    in.q.resize(p);
    for (auto& v : in.planes) v = rng.next_unit();
    for (auto& v : in.q) v = rng.next_unit();
    return in;
}

void check_backend_equivalence(const ph::kernels::Backend& a, const ph::kernels::Backend& b) {
    for (uint64_t seed = 0; seed < 12; ++seed) {
        for (size_t p : {1, 2, 3, 5}) {
            const size_t n = 1 + (seed * 13 + p * 7) % 70;
            const Input in = random_input(seed * 100 + p, n, p);
            std::vector<double> out_a(n), out_b(n);
            a.euclidean_row(in.planes.data(), n, p, in.q.data(), out_a.data());
            b.euclidean_row(in.planes.data(), n, p, in.q.data(), out_b.data());
            for (size_t i = 0; i < n; ++i) CHECK(out_a[i] == out_b[i]); // bit-exact

            a.chebyshev_row(in.planes.data(), n, p, in.q.data(), out_a.data());
            b.chebyshev_row(in.planes.data(), n, p, in.q.data(), out_b.data());
            for (size_t i = 0; i < n; ++i) CHECK(out_a[i] == out_b[i]);

            for (double radius : {0.0, 0.1, 0.5, 1.5}) {
                CHECK(a.count_within(in.planes.data(), n, p, in.q.data(), radius, false) ==
                      b.count_within(in.planes.data(), n, p, in.q.data(), radius, false));
                CHECK(a.count_within(in.planes.data(), n, p, in.q.data(), radius, true) ==
                      b.count_within(in.planes.data(), n, p, in.q.data(), radius, true));
            }
        }
    }
}

} // namespace

TEST_CASE("active backend matches the scalar reference bit for bit") {
    check_backend_equivalence(ph::kernels::scalar_backend(), ph::kernels::active_backend());
}

#if defined(__x86_64__)
TEST_CASE("avx2 backend matches scalar when the CPU supports it") {
    if (!__builtin_cpu_supports("avx2")) return;
    check_backend_equivalence(ph::kernels::scalar_backend(), ph::kernels::avx2_backend());
    const char* forced = std::getenv("PH_KERNEL_BACKEND");
    if (forced == nullptr)
        CHECK(std::string(ph::kernels::active_backend().name) == "avx2");
    else
        CHECK(std::string(ph::kernels::active_backend().name) == forced);
}
#endif

TEST_CASE("count_within agrees with a naive distance loop, boundary inclusive") {
    const Input in = random_input(5, 37, 2);
    // Push the query onto an exact point so the closed-ball tie is exercised.
    std::vector<double> planes = in.planes;
    std::vector<double> q{planes[4], planes[37 + 4]};
    for (bool chebyshev : {false, true}) {
        for (double radius : {0.0, 0.2, 0.7}) {
            size_t naive = 0;
            for (size_t i = 0; i < in.n; ++i) {
                double acc = 0.0;
                for (size_t d = 0; d < in.p; ++d) {
                    const double diff = planes[d * in.n + i] - q[d];
                    if (chebyshev)
                        acc = std::max(acc, std::fabs(diff));
                    else
                        acc += diff * diff;
                }
                if (!chebyshev) acc = std::sqrt(acc);
                if (acc <= radius) ++naive;
            }
            CHECK(ph::kernels::active_backend().count_within(planes.data(), in.n, in.p, q.data(),
                                                             radius, chebyshev) == naive);
        }
    }
}
