#include "qisolve/matrix.hpp"

#include "qisolve/errors.hpp"

namespace qis {

double compensated_sum_of_squares(std::span<const double> v) noexcept
{
    CompensatedSum acc;
    for (double x : v) acc.add(x * x);
    return acc.value();
}

double dot(std::span<const double> a, std::span<const double> b) noexcept
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> v) noexcept
{
    return std::sqrt(compensated_sum_of_squares(v));
}

DenseMatrix DenseMatrix::identity(std::size_t n)
{
    DenseMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) a(i, i) = 1.0;
    return a;
}

CsrMatrix CsrMatrix::from_dense(const DenseMatrix& a)
{
    CsrMatrix c;
    c.rows = a.rows;
    c.cols = a.cols;
    c.row_ptr.assign(1, 0);
    c.row_ptr.reserve(a.rows + 1);
    for (std::size_t i = 0; i < a.rows; ++i) {
        for (std::size_t j = 0; j < a.cols; ++j) {
            if (a(i, j) != 0.0) {
                c.col_idx.push_back(j);
                c.values.push_back(a(i, j));
            }
        }
        c.row_ptr.push_back(c.values.size());
    }
    return c;
}

DenseMatrix CsrMatrix::to_dense() const
{
    DenseMatrix a(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t p = row_ptr[i]; p < row_ptr[i + 1]; ++p) a(i, col_idx[p]) += values[p];
    return a;
}

std::vector<double> multiply(const DenseMatrix& a, std::span<const double> x)
{
    if (x.size() != a.cols) throw InvalidInput("multiply: dimension mismatch");
    std::vector<double> y(a.rows, 0.0);
    for (std::size_t i = 0; i < a.rows; ++i) y[i] = dot(a.row(i), x);
    return y;
}

std::vector<double> multiply_transpose(const DenseMatrix& a, std::span<const double> y)
{
    if (y.size() != a.rows) throw InvalidInput("multiply_transpose: dimension mismatch");
    std::vector<double> x(a.cols, 0.0);
    for (std::size_t i = 0; i < a.rows; ++i) {
        if (y[i] == 0.0) continue;
        const auto r = a.row(i);
        for (std::size_t j = 0; j < a.cols; ++j) x[j] += y[i] * r[j];
    }
    return x;
}

} // namespace qis
