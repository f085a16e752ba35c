#include "ph/kernels.hpp"

#include <cmath>

namespace ph::kernels {

namespace {

void euclidean_row_scalar(const double* planes, size_t n, size_t p, const double* q,
                          double* out) {
    for (size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (size_t d = 0; d < p; ++d) {
            const double diff = planes[d * n + i] - q[d];
            acc += diff * diff;
        }
        out[i] = std::sqrt(acc);
    }
}

void chebyshev_row_scalar(const double* planes, size_t n, size_t p, const double* q,
                          double* out) {
    for (size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (size_t d = 0; d < p; ++d) {
            const double diff = std::fabs(planes[d * n + i] - q[d]);
            acc = diff > acc ? diff : acc;
        }
        out[i] = acc;
    }
}

size_t count_within_scalar(const double* planes, size_t n, size_t p, const double* q,
                           double radius, bool chebyshev) {
    size_t count = 0;
    for (size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        if (chebyshev) {
            for (size_t d = 0; d < p; ++d) {
                const double diff = std::fabs(planes[d * n + i] - q[d]);
                acc = diff > acc ? diff : acc;
            }
        } else {
            for (size_t d = 0; d < p; ++d) {
                const double diff = planes[d * n + i] - q[d];
                acc += diff * diff;
            }
            acc = std::sqrt(acc);
        }
        if (acc <= radius) ++count;
    }
    return count;
}

} // namespace

const Backend& scalar_backend() {
    static const Backend backend{"scalar", euclidean_row_scalar, chebyshev_row_scalar,
                                 count_within_scalar};
    return backend;
}

} // namespace ph::kernels
