#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace qis {

/// Neumaier-compensated accumulator.
class CompensatedSum {
public:
    void add(double v) noexcept
    {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }

    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

double compensated_sum_of_squares(std::span<const double> v) noexcept;
double dot(std::span<const double> a, std::span<const double> b) noexcept;
double norm2(std::span<const double> v) noexcept;

/// Row-major dense matrix.
struct DenseMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    DenseMatrix() = default;
    DenseMatrix(std::size_t m, std::size_t n) : rows(m), cols(n), values(m * n, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return values[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return values[i * cols + j]; }

    std::span<const double> row(std::size_t i) const { return {values.data() + i * cols, cols}; }
    std::span<double> row(std::size_t i) { return {values.data() + i * cols, cols}; }

    static DenseMatrix identity(std::size_t n);
};

/// Compressed sparse row matrix; column indices sorted within each row.
struct CsrMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::size_t> row_ptr{0};
    std::vector<std::size_t> col_idx;
    std::vector<double> values;

    std::size_t nnz() const noexcept { return values.size(); }

    /// Drops exact zeros.
    static CsrMatrix from_dense(const DenseMatrix& a);
    DenseMatrix to_dense() const;
};

/// y = A x
std::vector<double> multiply(const DenseMatrix& a, std::span<const double> x);
/// y = A^T x
std::vector<double> multiply_transpose(const DenseMatrix& a, std::span<const double> y);

} // namespace qis
