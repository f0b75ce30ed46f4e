#include "mvtsk/matrix.hpp"

#include "mvtsk/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace mvtsk {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw std::invalid_argument("Matrix: data size does not match shape");
    }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw std::invalid_argument("Matrix: ragged initializer");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

void Matrix::fill(double v) {
    for (auto& x : data_) x = v;
}

bool Matrix::all_finite() const {
    for (double x : data_) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

bool Matrix::all_nonnegative() const {
    for (double x : data_) {
        if (!(x >= 0.0)) return false;
    }
    return true;
}

namespace {

void check_mul(std::size_t ak, std::size_t bk, const char* what) {
    if (ak != bk) throw std::invalid_argument(std::string("matmul: inner dimensions differ in ") + what);
}

} // namespace

Matrix matmul(const Matrix& a, const Matrix& b) {
    check_mul(a.cols(), b.rows(), "A*B");
    Matrix c(a.rows(), b.cols());
    active_kernels().matmul(a.data(), b.data(), c.data(), a.rows(), a.cols(), b.cols());
    return c;
}

Matrix matmul_t_left(const Matrix& a, const Matrix& b) {
    check_mul(a.rows(), b.rows(), "A^T*B");
    Matrix c(a.cols(), b.cols());
    active_kernels().matmul_at_b(a.data(), b.data(), c.data(), a.cols(), a.rows(), b.cols());
    return c;
}

Matrix matmul_t_right(const Matrix& a, const Matrix& b) {
    check_mul(a.cols(), b.cols(), "A*B^T");
    Matrix c(a.rows(), b.rows());
    active_kernels().matmul_a_bt(a.data(), b.data(), c.data(), a.rows(), a.cols(), b.rows());
    return c;
}

Matrix transpose(const Matrix& a) {
    Matrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    }
    return t;
}

Matrix add_scaled(const Matrix& a, double s, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("add_scaled: shape mismatch");
    }
    Matrix c = a;
    active_kernels().axpy(s, b.data(), c.data(), c.rows() * c.cols());
    return c;
}

double frobenius_sq(const Matrix& a) {
    return active_kernels().dot(a.data(), a.data(), a.rows() * a.cols());
}

double frobenius_sq_diff(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("frobenius_sq_diff: shape mismatch");
    }
    return active_kernels().sqdist(a.data(), b.data(), a.rows() * a.cols());
}

Matrix cholesky_solve(const Matrix& spd, const Matrix& rhs) {
    const std::size_t n = spd.rows();
    if (spd.cols() != n) throw std::invalid_argument("cholesky_solve: matrix not square");
    if (rhs.rows() != n) throw std::invalid_argument("cholesky_solve: rhs row count mismatch");
    const auto& k = active_kernels();

    // Lower-triangular factor, row by row.
    Matrix l(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            const double s = k.dot(l.row(i), l.row(j), j);
            if (i == j) {
                const double d = spd(i, i) - s;
                if (d <= 0.0 || !std::isfinite(d)) {
                    throw std::runtime_error("cholesky_solve: matrix is not positive definite");
                }
                l(i, j) = std::sqrt(d);
            } else {
                l(i, j) = (spd(i, j) - s) / l(j, j);
            }
        }
    }

    // Forward then back substitution, one rhs column at a time.
    Matrix x = rhs;
    const std::size_t c = rhs.cols();
    std::vector<double> col(n);
    for (std::size_t jc = 0; jc < c; ++jc) {
        for (std::size_t i = 0; i < n; ++i) col[i] = x(i, jc);
        for (std::size_t i = 0; i < n; ++i) {
            col[i] = (col[i] - k.dot(l.row(i), col.data(), i)) / l(i, i);
        }
        for (std::size_t ii = n; ii-- > 0;) {
            double s = col[ii];
            for (std::size_t j = ii + 1; j < n; ++j) s -= l(j, ii) * col[j];
            col[ii] = s / l(ii, ii);
        }
        for (std::size_t i = 0; i < n; ++i) x(i, jc) = col[i];
    }
    return x;
}

} // namespace mvtsk
