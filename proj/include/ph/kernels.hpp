#pragma once

// Distance kernels: scalar reference implementations plus SIMD variants
// selected at runtime. All backends are required to produce bit-identical
// results (same operation order per point, no FMA contraction), which the
// test suite asserts on random inputs.
//
// Points are passed in coordinate-plane layout ("structure of arrays"):
// `planes` holds p contiguous arrays of n doubles, plane d at planes + d*n.

#include <cstddef>

namespace ph::kernels {

// Euclidean distances (not squared) from query point q (p coordinates)
// to all n points. out[i] = sqrt(sum_d (planes[d*n+i] - q[d])^2).
using euclidean_row_fn = void (*)(const double* planes, size_t n, size_t p,
                                  const double* q, double* out);

// Chebyshev distances: out[i] = max_d |planes[d*n+i] - q[d]|.
using chebyshev_row_fn = void (*)(const double* planes, size_t n, size_t p,
                                  const double* q, double* out);

// Number of points with distance(q, x_i) <= radius (closed ball).
using count_within_fn = size_t (*)(const double* planes, size_t n, size_t p,
                                   const double* q, double radius, bool chebyshev);

struct Backend {
    const char* name;
    euclidean_row_fn euclidean_row;
    chebyshev_row_fn chebyshev_row;
    count_within_fn count_within;
};

const Backend& scalar_backend();
#if defined(__x86_64__) || defined(_M_X64)
const Backend& avx2_backend();
#endif

// Runtime-selected backend: AVX2 when the CPU supports it, scalar otherwise.
// Overridable with PH_KERNEL_BACKEND=scalar|avx2 (ignored when unsupported).
const Backend& active_backend();

} // namespace ph::kernels
