#include "qisolve/sqcore/matrix_sq.hpp"

#include <algorithm>
#include <cmath>

#include "qisolve/errors.hpp"

namespace qis {

namespace {

void require_shape(std::size_t m, std::size_t n)
{
    if (m == 0 || n == 0) throw InvalidInput("MatrixSQ requires m, n >= 1");
}

} // namespace

MatrixSQ MatrixSQ::build(const DenseMatrix& a, Storage storage)
{
    require_shape(a.rows, a.cols);
    if (a.values.size() != a.rows * a.cols) throw InvalidInput("dense matrix storage size mismatch");
    if (storage == Storage::sparse) {
        auto sq = build(CsrMatrix::from_dense(a));
        return sq;
    }
    MatrixSQ sq;
    sq.cols_ = a.cols;
    sq.storage_ = Storage::dense;
    sq.rows_.reserve(a.rows);
    for (std::size_t i = 0; i < a.rows; ++i) sq.rows_.push_back(VectorSQ::dense(a.row(i)));
    sq.finish();
    return sq;
}

MatrixSQ MatrixSQ::build(const CsrMatrix& a)
{
    require_shape(a.rows, a.cols);
    if (a.row_ptr.size() != a.rows + 1 || a.row_ptr.back() != a.values.size() ||
        a.col_idx.size() != a.values.size())
        throw InvalidInput("CSR matrix structure is inconsistent");
    MatrixSQ sq;
    sq.cols_ = a.cols;
    sq.storage_ = Storage::sparse;
    sq.rows_.reserve(a.rows);
    for (std::size_t i = 0; i < a.rows; ++i) {
        const std::size_t b = a.row_ptr[i], e = a.row_ptr[i + 1];
        sq.rows_.push_back(VectorSQ::sparse(
            a.cols, std::span<const std::size_t>(a.col_idx.data() + b, e - b),
            std::span<const double>(a.values.data() + b, e - b)));
    }
    sq.finish();
    return sq;
}

void MatrixSQ::finish()
{
    std::vector<CompensatedSum> col_acc(cols_);
    std::vector<double> row_norm(rows_.size());
    CompensatedSum fro;
    row_sparsity_ = 0;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        const VectorSQ& r = rows_[i];
        const auto vals = r.values();
        std::size_t nnz = 0;
        for (std::size_t p = 0; p < vals.size(); ++p) {
            if (vals[p] == 0.0) continue;
            ++nnz;
            const std::size_t j = r.is_sparse() ? r.indices()[p] : p;
            col_acc[j].add(vals[p] * vals[p]);
        }
        row_sparsity_ = std::max(row_sparsity_, nnz);
        const double w = r.squared_norm();
        row_norm[i] = std::sqrt(w);
        fro.add(w);
    }
    frobenius_sq_ = fro.value();
    if (!(frobenius_sq_ > 0.0)) throw EmptyDistribution("matrix has no nonzero entries");

    column_norm_sq_.resize(cols_);
    std::vector<double> col_norm(cols_);
    min_column_norm_sq_ = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) {
        column_norm_sq_[j] = col_acc[j].value();
        col_norm[j] = std::sqrt(column_norm_sq_[j]);
        if (column_norm_sq_[j] > 0.0 &&
            (min_column_norm_sq_ == 0.0 || column_norm_sq_[j] < min_column_norm_sq_))
            min_column_norm_sq_ = column_norm_sq_[j];
    }
    row_norms_ = VectorSQ::dense(row_norm);
    column_norms_ = VectorSQ::dense(col_norm);
}

const VectorSQ& MatrixSQ::row(std::size_t i) const
{
    if (i >= rows_.size()) throw IndexError(i, rows_.size());
    return rows_[i];
}

double MatrixSQ::column_norm_sq(std::size_t j) const
{
    if (j >= cols_) throw IndexError(j, cols_);
    return column_norm_sq_[j];
}

double MatrixSQ::frobenius() const noexcept { return std::sqrt(frobenius_sq_); }

double MatrixSQ::row_dot(std::size_t i, std::span<const double> x) const
{
    const VectorSQ& r = row(i);
    if (x.size() != cols_) throw InvalidInput("row_dot: dimension mismatch");
    const auto vals = r.values();
    if (!r.is_sparse()) return dot(vals, x);
    const auto idx = r.indices();
    double s = 0.0;
    for (std::size_t p = 0; p < vals.size(); ++p) s += vals[p] * x[idx[p]];
    return s;
}

double MatrixSQ::row_dot_row(std::size_t i, std::size_t k) const
{
    const VectorSQ& a = row(i);
    const VectorSQ& b = row(k);
    if (!a.is_sparse()) return dot(a.values(), b.values());
    const auto ia = a.indices(), ib = b.indices();
    const auto va = a.values(), vb = b.values();
    double s = 0.0;
    std::size_t p = 0, q = 0;
    while (p < ia.size() && q < ib.size()) {
        if (ia[p] < ib[q]) {
            ++p;
        } else if (ib[q] < ia[p]) {
            ++q;
        } else {
            s += va[p++] * vb[q++];
        }
    }
    return s;
}

void MatrixSQ::axpy_row(std::size_t i, double alpha, std::span<double> x) const
{
    const VectorSQ& r = row(i);
    if (x.size() != cols_) throw InvalidInput("axpy_row: dimension mismatch");
    const auto vals = r.values();
    if (!r.is_sparse()) {
        for (std::size_t j = 0; j < vals.size(); ++j) x[j] += alpha * vals[j];
        return;
    }
    const auto idx = r.indices();
    for (std::size_t p = 0; p < vals.size(); ++p) x[idx[p]] += alpha * vals[p];
}

DenseMatrix MatrixSQ::to_dense() const
{
    DenseMatrix a(rows(), cols_);
    for (std::size_t i = 0; i < rows(); ++i) {
        const VectorSQ& r = rows_[i];
        const auto vals = r.values();
        for (std::size_t p = 0; p < vals.size(); ++p)
            a(i, r.is_sparse() ? r.indices()[p] : p) = vals[p];
    }
    return a;
}

} // namespace qis
