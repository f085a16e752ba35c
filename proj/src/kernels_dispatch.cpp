#include "ph/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace ph::kernels {

namespace {

const Backend& select_backend() {
    const char* requested = std::getenv("PH_KERNEL_BACKEND");
#if defined(__x86_64__) || defined(_M_X64)
    const bool cpu_ok = __builtin_cpu_supports("avx2");
    if (requested != nullptr) {
        if (std::strcmp(requested, "scalar") == 0) return scalar_backend();
        if (std::strcmp(requested, "avx2") == 0 && cpu_ok) return avx2_backend();
    }
    if (cpu_ok) return avx2_backend();
#else
    (void)requested;
#endif
    return scalar_backend();
}

} // namespace

const Backend& active_backend() {
    static const Backend& backend = select_backend();
    return backend;
}

} // namespace ph::kernels
