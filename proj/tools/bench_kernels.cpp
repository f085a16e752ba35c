// Micro-benchmark for the distance kernels: scalar reference vs the
// runtime-dispatched backend. Reports full-row throughput.

#include <chrono>
#include <cstdio>
#include <vector>

#include "ph/kernels.hpp"
#include "ph/rng.hpp"

namespace {

double bench(const ph::kernels::Backend& backend, size_t n, size_t p, bool chebyshev,
             size_t rounds) {
    ph::RngStream rng(ph::derive(1, n * 31 + p));
    std::vector<double> planes(n * p), q(p), out(n);
    for (auto& v : planes) v = rng.next_unit();
    for (auto& v : q) v = rng.next_unit();

    const auto start = std::chrono::steady_clock::now();
    double sink = 0.0;
    for (size_t r = 0; r < rounds; ++r) {
        if (chebyshev)
            backend.chebyshev_row(planes.data(), n, p, q.data(), out.data());
        else
            backend.euclidean_row(planes.data(), n, p, q.data(), out.data());
        sink += out[r % n];
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (sink == -1.0) std::printf("~");
    return static_cast<double>(n) * static_cast<double>(rounds) / seconds / 1e6;
}

} // namespace

int main() {
    const auto& scalar = ph::kernels::scalar_backend();
    const auto& active = ph::kernels::active_backend();
    std::printf("active backend: %s\n", active.name);
    std::printf("%8s %4s %10s  %12s  %12s  %8s\n", "n", "p", "metric", "scalar Mpt/s",
                "active Mpt/s", "speedup");
    for (size_t n : {1000, 10000, 100000}) {
        for (size_t p : {1, 2, 3}) {
            for (bool chebyshev : {false, true}) {
                const size_t rounds = 20000000 / n;
                const double s = bench(scalar, n, p, chebyshev, rounds);
                const double a = bench(active, n, p, chebyshev, rounds);
                std::printf("%8zu %4zu %10s  %12.1f  %12.1f  %7.2fx\n", n, p,
                            chebyshev ? "chebyshev" : "euclidean", s, a, a / s);
            }
        }
    }
    return 0;
}
