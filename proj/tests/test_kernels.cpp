#include "mvtsk/kernels.hpp"
#include "mvtsk/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

using namespace mvtsk;

namespace {

// Lengths chosen to straddle the 4-wide AVX2 lanes: every remainder count,
// one and two full vectors, and a few larger odd sizes.
const std::vector<std::size_t> kLengths = {1, 2, 3, 4, 5, 6, 7, 8, 9, 11, 15, 16, 17, 31, 33, 64, 100};

std::vector<double> random_vec(Rng& rng, std::size_t n, double lo, double hi) {
    std::vector<double> v(n);
    for (double& x : v) x = rng.uniform(lo, hi);
    return v;
}

bool close(double a, double b, double tol) {
    return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

void check_table_against_loops(const Kernels& k) {
    Rng rng(42);
    for (std::size_t n : kLengths) {
        CAPTURE(n);
        const auto a = random_vec(rng, n, 0.2, 1.2);
        const auto b = random_vec(rng, n, -1.0, 1.0);
        const auto w = random_vec(rng, n, 0.1, 2.0);

        double dot_ref = 0.0, sum_ref = 0.0, sq_ref = 0.0, wsq_ref = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            dot_ref += a[i] * b[i];
            sum_ref += a[i];
            const double d = a[i] - b[i];
            sq_ref += d * d;
            wsq_ref += w[i] * d * d;
        }
        CHECK(close(k.dot(a.data(), b.data(), n), dot_ref, 1e-12));
        CHECK(close(k.sum(a.data(), n), sum_ref, 1e-12));
        CHECK(close(k.sqdist(a.data(), b.data(), n), sq_ref, 1e-12));
        CHECK(close(k.weighted_sqdist(a.data(), b.data(), w.data(), n), wsq_ref, 1e-12));

        auto y = random_vec(rng, n, -1.0, 1.0);
        auto y_ref = y;
        const double alpha = rng.uniform(-2.0, 2.0);
        k.axpy(alpha, a.data(), y.data(), n);
        for (std::size_t i = 0; i < n; ++i) y_ref[i] += alpha * a[i];
        for (std::size_t i = 0; i < n; ++i) CHECK(close(y[i], y_ref[i], 1e-13));

        auto h = random_vec(rng, n, 0.1, 2.0);
        auto h_ref = h;
        k.mul_div_guard(h.data(), a.data(), w.data(), 1e-12, n);
        for (std::size_t i = 0; i < n; ++i) h_ref[i] *= a[i] / (w[i] + 1e-12);
        for (std::size_t i = 0; i < n; ++i) CHECK(close(h[i], h_ref[i], 1e-13));
    }
}

void check_matmuls_against_loops(const Kernels& k) {
    Rng rng(7);
    const std::size_t sizes[] = {1, 2, 3, 5, 8, 13};
    for (std::size_t m : sizes) {
        for (std::size_t kk : sizes) {
            for (std::size_t n : sizes) {
                const auto a = random_vec(rng, m * kk, -1.0, 1.0); // m x k
                const auto b = random_vec(rng, kk * n, -1.0, 1.0); // k x n
                std::vector<double> c(m * n, -99.0), ref(m * n, 0.0);

                k.matmul(a.data(), b.data(), c.data(), m, kk, n);
                for (std::size_t i = 0; i < m; ++i)
                    for (std::size_t j = 0; j < n; ++j)
                        for (std::size_t l = 0; l < kk; ++l)
                            ref[i * n + j] += a[i * kk + l] * b[l * n + j];
                for (std::size_t i = 0; i < m * n; ++i) CHECK(close(c[i], ref[i], 1e-12));

                // A^T*B: A stored k x m.
                const auto at = random_vec(rng, kk * m, -1.0, 1.0);
                std::fill(ref.begin(), ref.end(), 0.0);
                k.matmul_at_b(at.data(), b.data(), c.data(), m, kk, n);
                for (std::size_t i = 0; i < m; ++i)
                    for (std::size_t j = 0; j < n; ++j)
                        for (std::size_t l = 0; l < kk; ++l)
                            ref[i * n + j] += at[l * m + i] * b[l * n + j];
                for (std::size_t i = 0; i < m * n; ++i) CHECK(close(c[i], ref[i], 1e-12));

                // A*B^T: B stored n x k.
                const auto bt = random_vec(rng, n * kk, -1.0, 1.0);
                std::fill(ref.begin(), ref.end(), 0.0);
                k.matmul_a_bt(a.data(), bt.data(), c.data(), m, kk, n);
                for (std::size_t i = 0; i < m; ++i)
                    for (std::size_t j = 0; j < n; ++j)
                        for (std::size_t l = 0; l < kk; ++l)
                            ref[i * n + j] += a[i * kk + l] * bt[j * kk + l];
                for (std::size_t i = 0; i < m * n; ++i) CHECK(close(c[i], ref[i], 1e-12));
            }
        }
    }
}

} // namespace

TEST_SUITE("kernels") {

TEST_CASE("scalar table matches plain loops") {
    check_table_against_loops(scalar_kernels());
    check_matmuls_against_loops(scalar_kernels());
}

TEST_CASE("avx2 table matches plain loops") {
    if (!avx2_available()) return; // nothing to check on this machine
    check_table_against_loops(avx2_kernels());
    check_matmuls_against_loops(avx2_kernels());
}

TEST_CASE("scalar and avx2 agree on identical inputs") {
    if (!avx2_available()) return;
    const Kernels& s = scalar_kernels();
    const Kernels& v = avx2_kernels();
    Rng rng(99);
    for (std::size_t n : kLengths) {
        CAPTURE(n);
        const auto a = random_vec(rng, n, 0.1, 1.5);
        const auto b = random_vec(rng, n, -1.5, 1.5);
        const auto w = random_vec(rng, n, 0.1, 1.0);
        // FMA and lane-wise accumulation reorder the sums, so agreement is to
        // rounding, not bitwise.
        CHECK(close(s.dot(a.data(), b.data(), n), v.dot(a.data(), b.data(), n), 1e-13));
        CHECK(close(s.sum(a.data(), n), v.sum(a.data(), n), 1e-13));
        CHECK(close(s.sqdist(a.data(), b.data(), n), v.sqdist(a.data(), b.data(), n), 1e-13));
        CHECK(close(s.weighted_sqdist(a.data(), b.data(), w.data(), n),
                    v.weighted_sqdist(a.data(), b.data(), w.data(), n), 1e-13));

        auto y1 = b, y2 = b;
        s.axpy(0.37, a.data(), y1.data(), n);
        v.axpy(0.37, a.data(), y2.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(close(y1[i], y2[i], 1e-14));

        auto h1 = w, h2 = w;
        s.mul_div_guard(h1.data(), a.data(), b.data(), 1e-12, n);
        v.mul_div_guard(h2.data(), a.data(), b.data(), 1e-12, n);
        for (std::size_t i = 0; i < n; ++i) CHECK(close(h1[i], h2[i], 1e-13));
    }

    const std::size_t m = 7, kk = 9, n = 5;
    const auto a = random_vec(rng, m * kk, -1.0, 1.0);
    const auto b = random_vec(rng, kk * n, -1.0, 1.0);
    std::vector<double> c1(m * n), c2(m * n);
    s.matmul(a.data(), b.data(), c1.data(), m, kk, n);
    v.matmul(a.data(), b.data(), c2.data(), m, kk, n);
    for (std::size_t i = 0; i < m * n; ++i) CHECK(close(c1[i], c2[i], 1e-13));
}

TEST_CASE("active table is one of the two implementations") {
    const Kernels& k = active_kernels();
    REQUIRE(k.name != nullptr);
    const std::string name = k.name;
    CHECK((name == "scalar" || name == "avx2"));
    if (!avx2_available()) CHECK(name == "scalar");
    // Smoke call through every pointer so a half-wired table cannot slip by.
    const double a[3] = {1.0, 2.0, 3.0}, b[3] = {4.0, 5.0, 6.0};
    CHECK(k.dot(a, b, 3) == doctest::Approx(32.0));
    CHECK(k.sum(a, 3) == doctest::Approx(6.0));
    CHECK(k.sqdist(a, b, 3) == doctest::Approx(27.0));
}

TEST_CASE("axpy with zero alpha leaves the target untouched") {
    Rng rng(3);
    auto y = random_vec(rng, 17, -1.0, 1.0);
    const auto x = random_vec(rng, 17, -1.0, 1.0);
    const auto before = y;
    active_kernels().axpy(0.0, x.data(), y.data(), y.size());
    CHECK(y == before);
}

} // TEST_SUITE
