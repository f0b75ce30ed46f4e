#include "mvtsk/kernels.hpp"

#if defined(__x86_64__) && defined(__AVX2__) && defined(__FMA__)
#define MVTSK_HAVE_AVX2_BUILD 1
#include <immintrin.h>
#include <cstring>
#else
#define MVTSK_HAVE_AVX2_BUILD 0
#endif

namespace mvtsk {

#if MVTSK_HAVE_AVX2_BUILD

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
    }
    double tail = 0.0;
    for (; i < n; ++i) tail += a[i] * b[i];
    return hsum(acc) + tail;
}

double sum_avx2(const double* a, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
    double tail = 0.0;
    for (; i < n; ++i) tail += a[i];
    return hsum(acc) + tail;
}

double sqdist_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_fmadd_pd(d, d, acc);
    }
    double tail = 0.0;
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        tail += d * d;
    }
    return hsum(acc) + tail;
}

double weighted_sqdist_avx2(const double* x, const double* c, const double* w, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(c + i));
        acc = _mm256_fmadd_pd(_mm256_mul_pd(d, d), _mm256_loadu_pd(w + i), acc);
    }
    double tail = 0.0;
    for (; i < n; ++i) {
        const double d = x[i] - c[i];
        tail += w[i] * d * d;
    }
    return hsum(acc) + tail;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void mul_div_guard_avx2(double* h, const double* num, const double* den, double guard, std::size_t n) {
    const __m256d vg = _mm256_set1_pd(guard);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d ratio = _mm256_div_pd(_mm256_loadu_pd(num + i),
                                            _mm256_add_pd(_mm256_loadu_pd(den + i), vg));
        _mm256_storeu_pd(h + i, _mm256_mul_pd(_mm256_loadu_pd(h + i), ratio));
    }
    for (; i < n; ++i) h[i] *= num[i] / (den[i] + guard);
}

void matmul_avx2(const double* a, const double* b, double* c,
                 std::size_t m, std::size_t k, std::size_t n) {
    std::memset(c, 0, m * n * sizeof(double));
    for (std::size_t i = 0; i < m; ++i) {
        double* crow = c + i * n;
        for (std::size_t l = 0; l < k; ++l) {
            const double aval = a[i * k + l];
            if (aval == 0.0) continue;
            axpy_avx2(aval, b + l * n, crow, n);
        }
    }
}

void matmul_at_b_avx2(const double* a, const double* b, double* c,
                      std::size_t m, std::size_t k, std::size_t n) {
    std::memset(c, 0, m * n * sizeof(double));
    for (std::size_t l = 0; l < k; ++l) {
        const double* arow = a + l * m;
        const double* brow = b + l * n;
        for (std::size_t i = 0; i < m; ++i) {
            if (arow[i] == 0.0) continue;
            axpy_avx2(arow[i], brow, c + i * n, n);
        }
    }
}

void matmul_a_bt_avx2(const double* a, const double* b, double* c,
                      std::size_t m, std::size_t k, std::size_t n) {
    for (std::size_t i = 0; i < m; ++i) {
        const double* arow = a + i * k;
        for (std::size_t j = 0; j < n; ++j) {
            c[i * n + j] = dot_avx2(arow, b + j * k, k);
        }
    }
}

} // namespace

const Kernels& avx2_kernels() {
    static const Kernels table = {
        dot_avx2,
        sum_avx2,
        sqdist_avx2,
        weighted_sqdist_avx2,
        axpy_avx2,
        mul_div_guard_avx2,
        matmul_avx2,
        matmul_at_b_avx2,
        matmul_a_bt_avx2,
        "avx2",
    };
    return table;
}

bool avx2_kernels_built() { return true; }

#else

// Built without AVX2 support (non-x86 target or compiler flags absent);
// dispatch falls back to the scalar table.
const Kernels& avx2_kernels() { return scalar_kernels(); }

bool avx2_kernels_built() { return false; }

#endif

} // namespace mvtsk
