#pragma once

#include <cstddef>
#include <vector>

#include "qisolve/matrix.hpp"
#include "qisolve/rng.hpp"
#include "qisolve/sqcore/vector_sq.hpp"

namespace qis {

enum class Storage { dense, sparse };

/// Sampling-and-query access to an m x n matrix.
///
/// Holds SQ access to every row A_{i*}, to the row-norm vector
/// (||A_{1*}||, ..., ||A_{m*}||) and to the column-norm vector
/// (||A_{*1}||, ..., ||A_{*n}||). Row sampling draws i with probability
/// ||A_{i*}||^2 / ||A||_F^2 and column sampling draws j with probability
/// ||A_{*j}||^2 / ||A||_F^2. Zero rows and columns get probability zero.
///
/// Immutable after build.
class MatrixSQ {
public:
    /// Throws InvalidInput on non-finite entries or empty shape and
    /// EmptyDistribution when every entry is zero.
    static MatrixSQ build(const DenseMatrix& a, Storage storage = Storage::dense);
    static MatrixSQ build(const CsrMatrix& a);

    std::size_t rows() const noexcept { return rows_.size(); }
    std::size_t cols() const noexcept { return cols_; }
    Storage storage() const noexcept { return storage_; }

    /// Largest stored-nonzero count over all rows.
    std::size_t row_sparsity() const noexcept { return row_sparsity_; }

    const VectorSQ& row(std::size_t i) const;
    const VectorSQ& row_norms() const noexcept { return row_norms_; }
    const VectorSQ& column_norms() const noexcept { return column_norms_; }

    double entry(std::size_t i, std::size_t j) const { return row(i).query(j); }
    double row_norm_sq(std::size_t i) const { return row(i).squared_norm(); }
    double column_norm_sq(std::size_t j) const;

    double frobenius() const noexcept;
    double frobenius_sq() const noexcept { return frobenius_sq_; }

    /// min_j ||A_{*j}||^2 over columns with nonzero norm.
    double min_column_norm_sq() const noexcept { return min_column_norm_sq_; }

    std::size_t sample_row(Rng& rng) const { return row_norms_.sample(rng); }
    std::size_t sample_column(Rng& rng) const { return column_norms_.sample(rng); }

    /// <A_{i*}, x> for a dense x of length cols().
    double row_dot(std::size_t i, std::span<const double> x) const;
    /// <A_{i*}, A_{k*}>
    double row_dot_row(std::size_t i, std::size_t k) const;
    /// x += alpha * A_{i*}
    void axpy_row(std::size_t i, double alpha, std::span<double> x) const;

    DenseMatrix to_dense() const;

private:
    void finish();

    std::size_t cols_ = 0;
    Storage storage_ = Storage::dense;
    std::size_t row_sparsity_ = 0;
    std::vector<VectorSQ> rows_;
    VectorSQ row_norms_;
    VectorSQ column_norms_;
    std::vector<double> column_norm_sq_;
    double frobenius_sq_ = 0.0;
    double min_column_norm_sq_ = 0.0;
};

} // namespace qis
