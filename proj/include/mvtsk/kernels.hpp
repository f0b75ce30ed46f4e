#pragma once

#include <cstddef>

namespace mvtsk {

/// Dense double-precision kernels behind the numeric code. All matrix
/// arguments are row-major and contiguous. Two implementations exist: a
/// scalar reference and an AVX2 variant; the active table is chosen once at
/// startup (see active_kernels).
struct Kernels {
    /// sum_i a[i]*b[i]
    double (*dot)(const double* a, const double* b, std::size_t n);
    /// sum_i a[i]
    double (*sum)(const double* a, std::size_t n);
    /// sum_i (a[i]-b[i])^2
    double (*sqdist)(const double* a, const double* b, std::size_t n);
    /// sum_i w[i]*(x[i]-c[i])^2
    double (*weighted_sqdist)(const double* x, const double* c, const double* w, std::size_t n);
    /// y[i] += alpha*x[i]
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    /// h[i] *= num[i] / (den[i] + guard)   (multiplicative-update core)
    void (*mul_div_guard)(double* h, const double* num, const double* den, double guard, std::size_t n);
    /// C = A*B with A m-by-k, B k-by-n, C m-by-n (C is overwritten)
    void (*matmul)(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n);
    /// C = A^T*B with A k-by-m, B k-by-n, C m-by-n
    void (*matmul_at_b)(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n);
    /// C = A*B^T with A m-by-k, B n-by-k, C m-by-n
    void (*matmul_a_bt)(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n);

    const char* name;
};

const Kernels& scalar_kernels();

/// True when the CPU (and build) can run the AVX2 table.
bool avx2_available();

/// AVX2 table; only valid to call when avx2_available() is true.
const Kernels& avx2_kernels();

/// The table used by the rest of the library: AVX2 when available, scalar
/// otherwise. Environment variable MVTSK_KERNELS=scalar|avx2 overrides.
const Kernels& active_kernels();

} // namespace mvtsk
