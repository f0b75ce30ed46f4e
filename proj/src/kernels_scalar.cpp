#include "mvtsk/kernels.hpp"

#include <cstring>

namespace mvtsk {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double sum_scalar(const double* a, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i];
    return acc;
}

double sqdist_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

double weighted_sqdist_scalar(const double* x, const double* c, const double* w, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - c[i];
        acc += w[i] * d * d;
    }
    return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void mul_div_guard_scalar(double* h, const double* num, const double* den, double guard, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) h[i] *= num[i] / (den[i] + guard);
}

// C = A*B, i-k-j order so the inner loop walks contiguous rows of B and C.
void matmul_scalar(const double* a, const double* b, double* c,
                   std::size_t m, std::size_t k, std::size_t n) {
    std::memset(c, 0, m * n * sizeof(double));
    for (std::size_t i = 0; i < m; ++i) {
        double* crow = c + i * n;
        for (std::size_t l = 0; l < k; ++l) {
            const double aval = a[i * k + l];
            if (aval == 0.0) continue;
            const double* brow = b + l * n;
            for (std::size_t j = 0; j < n; ++j) crow[j] += aval * brow[j];
        }
    }
}

// C = A^T*B with A k-by-m: accumulate one outer product per shared row.
void matmul_at_b_scalar(const double* a, const double* b, double* c,
                        std::size_t m, std::size_t k, std::size_t n) {
    std::memset(c, 0, m * n * sizeof(double));
    for (std::size_t l = 0; l < k; ++l) {
        const double* arow = a + l * m;
        const double* brow = b + l * n;
        for (std::size_t i = 0; i < m; ++i) {
            const double aval = arow[i];
            if (aval == 0.0) continue;
            double* crow = c + i * n;
            for (std::size_t j = 0; j < n; ++j) crow[j] += aval * brow[j];
        }
    }
}

// C = A*B^T: every output entry is a dot product of two contiguous rows.
void matmul_a_bt_scalar(const double* a, const double* b, double* c,
                        std::size_t m, std::size_t k, std::size_t n) {
    for (std::size_t i = 0; i < m; ++i) {
        const double* arow = a + i * k;
        for (std::size_t j = 0; j < n; ++j) {
            c[i * n + j] = dot_scalar(arow, b + j * k, k);
        }
    }
}

} // namespace

const Kernels& scalar_kernels() {
    static const Kernels table = {
        dot_scalar,
        sum_scalar,
        sqdist_scalar,
        weighted_sqdist_scalar,
        axpy_scalar,
        mul_div_guard_scalar,
        matmul_scalar,
        matmul_at_b_scalar,
        matmul_a_bt_scalar,
        "scalar",
    };
    return table;
}

} // namespace mvtsk
