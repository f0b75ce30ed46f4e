#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace mvtsk {

/// Dense row-major double matrix. Deliberately small: storage, element
/// access and the handful of products the solvers need, all routed through
/// the kernel dispatch table.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
    /// Row-by-row construction, mostly for tests: Matrix{{1,2},{3,4}}.
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* row(std::size_t i) { return data_.data() + i * cols_; }
    const double* row(std::size_t i) const { return data_.data() + i * cols_; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::vector<double>& storage() { return data_; }
    const std::vector<double>& storage() const { return data_; }

    void fill(double v);
    bool all_finite() const;
    bool all_nonnegative() const;

    bool operator==(const Matrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// C = A*B
[[nodiscard]] Matrix matmul(const Matrix& a, const Matrix& b);
/// C = A^T*B
[[nodiscard]] Matrix matmul_t_left(const Matrix& a, const Matrix& b);
/// C = A*B^T
[[nodiscard]] Matrix matmul_t_right(const Matrix& a, const Matrix& b);

[[nodiscard]] Matrix transpose(const Matrix& a);

/// a + s*b, elementwise; shapes must match.
[[nodiscard]] Matrix add_scaled(const Matrix& a, double s, const Matrix& b);

double frobenius_sq(const Matrix& a);

/// ||a - b||_F^2
double frobenius_sq_diff(const Matrix& a, const Matrix& b);

/// Solve spd * X = rhs for X via Cholesky. `spd` must be symmetric positive
/// definite; throws std::runtime_error on a non-positive pivot.
Matrix cholesky_solve(const Matrix& spd, const Matrix& rhs);

} // namespace mvtsk
