#include "ph/kernels.hpp"

#include <cmath>
#include <immintrin.h>

// Per-lane operation order matches the scalar backend exactly (accumulate
// diff*diff over dimensions in increasing d, then one sqrt), so results are
// bit-identical. Built with -mavx2 and -ffp-contract=off.

namespace ph::kernels {

namespace {

inline __m256d abs_pd(__m256d x) {
    const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7FFFFFFFFFFFFFFFll));
    return _mm256_and_pd(x, mask);
}

void euclidean_row_avx2(const double* planes, size_t n, size_t p, const double* q,
                        double* out) {
    const size_t n4 = n & ~size_t(3);
    for (size_t i = 0; i < n4; i += 4) {
        __m256d acc = _mm256_setzero_pd();
        for (size_t d = 0; d < p; ++d) {
            const __m256d x = _mm256_loadu_pd(planes + d * n + i);
            const __m256d diff = _mm256_sub_pd(x, _mm256_set1_pd(q[d]));
            acc = _mm256_add_pd(acc, _mm256_mul_pd(diff, diff));
        }
        _mm256_storeu_pd(out + i, _mm256_sqrt_pd(acc));
    }
    for (size_t i = n4; i < n; ++i) {
        double acc = 0.0;
        for (size_t d = 0; d < p; ++d) {
            const double diff = planes[d * n + i] - q[d];
            acc += diff * diff;
        }
        out[i] = std::sqrt(acc);
    }
}

void chebyshev_row_avx2(const double* planes, size_t n, size_t p, const double* q,
                        double* out) {
    const size_t n4 = n & ~size_t(3);
    for (size_t i = 0; i < n4; i += 4) {
        __m256d acc = _mm256_setzero_pd();
        for (size_t d = 0; d < p; ++d) {
            const __m256d x = _mm256_loadu_pd(planes + d * n + i);
            const __m256d diff = abs_pd(_mm256_sub_pd(x, _mm256_set1_pd(q[d])));
            acc = _mm256_max_pd(acc, diff);
        }
        _mm256_storeu_pd(out + i, acc);
    }
    for (size_t i = n4; i < n; ++i) {
        double acc = 0.0;
        for (size_t d = 0; d < p; ++d) {
            const double diff = std::fabs(planes[d * n + i] - q[d]);
            acc = diff > acc ? diff : acc;
        }
        out[i] = acc;
    }
}

size_t count_within_avx2(const double* planes, size_t n, size_t p, const double* q,
                         double radius, bool chebyshev) {
    const size_t n4 = n & ~size_t(3);
    const __m256d rad = _mm256_set1_pd(radius);
    size_t count = 0;
    for (size_t i = 0; i < n4; i += 4) {
        __m256d acc = _mm256_setzero_pd();
        if (chebyshev) {
            for (size_t d = 0; d < p; ++d) {
                const __m256d x = _mm256_loadu_pd(planes + d * n + i);
                acc = _mm256_max_pd(acc, abs_pd(_mm256_sub_pd(x, _mm256_set1_pd(q[d]))));
            }
        } else {
            for (size_t d = 0; d < p; ++d) {
                const __m256d x = _mm256_loadu_pd(planes + d * n + i);
                const __m256d diff = _mm256_sub_pd(x, _mm256_set1_pd(q[d]));
                acc = _mm256_add_pd(acc, _mm256_mul_pd(diff, diff));
            }
            acc = _mm256_sqrt_pd(acc);
        }
        const __m256d le = _mm256_cmp_pd(acc, rad, _CMP_LE_OQ);
        count += static_cast<size_t>(_mm_popcnt_u32(
            static_cast<unsigned>(_mm256_movemask_pd(le))));
    }
    for (size_t i = n4; i < n; ++i) {
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

const Backend& avx2_backend() {
    static const Backend backend{"avx2", euclidean_row_avx2, chebyshev_row_avx2,
                                 count_within_avx2};
    return backend;
}

} // namespace ph::kernels
