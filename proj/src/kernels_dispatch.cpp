#include "mvtsk/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace mvtsk {

bool avx2_kernels_built(); // defined in kernels_avx2.cpp

bool avx2_available() {
#if defined(__x86_64__)
    return avx2_kernels_built() && __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {

const Kernels& select_kernels() {
    if (const char* env = std::getenv("MVTSK_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) return scalar_kernels();
        if (std::strcmp(env, "avx2") == 0 && avx2_available()) return avx2_kernels();
    }
    return avx2_available() ? avx2_kernels() : scalar_kernels();
}

} // namespace

const Kernels& active_kernels() {
    static const Kernels& table = select_kernels();
    return table;
}

} // namespace mvtsk
