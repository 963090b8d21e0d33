#include "qisolve/solvers/types.hpp"

#include <algorithm>
#include <cmath>

#include "qisolve/errors.hpp"

namespace qis {

void SolverConfig::validate() const
{
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw InvalidInput("epsilon must lie in (0, 1]");
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidInput("delta must lie in (0, 1)");
    if (d < 1 || T < 1 || q < 1) throw InvalidInput("d, T and q must be at least 1");
    if (!(kappa >= 1.0) || !(kappa_f >= 1.0))
        throw InvalidInput("condition numbers must be at least 1");
    // kappa <= kappa_f holds exactly; allow rounding noise from the oracle.
    if (kappa > kappa_f * (1.0 + 1e-9)) throw InvalidInput("kappa must not exceed kappa_f");
    if (!(inv_norm > 0.0)) throw InvalidInput("inv_norm must be positive");
    if (trace_stride < 1) throw InvalidInput("trace_stride must be at least 1");
    if (stop_tolerance && !(*stop_tolerance >= 0.0))
        throw InvalidInput("stop_tolerance must be non-negative");
}

SparseDescription::SparseDescription(const MatrixSQ& matrix, DescriptionBasis basis)
    : matrix_(&matrix), basis_(basis)
{
    if (basis == DescriptionBasis::identity && matrix.rows() != matrix.cols())
        throw InvalidInput("identity-basis description requires a square matrix");
}

SparseDescription::SparseDescription(const MatrixSQ& matrix, std::vector<std::size_t> support,
                                     std::vector<double> values, DescriptionBasis basis)
    : SparseDescription(matrix, basis)
{
    if (support.size() != values.size())
        throw InvalidInput("description support/value length mismatch");
    const std::size_t dim = coefficient_dimension();
    for (std::size_t k = 0; k < support.size(); ++k) {
        if (support[k] >= dim) throw IndexError(support[k], dim);
        if (k > 0 && support[k] <= support[k - 1])
            throw InvalidInput("description support must be strictly increasing");
        if (!std::isfinite(values[k])) throw InvalidInput("non-finite description value");
    }
    support_ = std::move(support);
    values_ = std::move(values);
}

std::size_t SparseDescription::coefficient_dimension() const
{
    return basis_ == DescriptionBasis::rows ? matrix().rows() : matrix().cols();
}

std::size_t SparseDescription::solution_dimension() const { return matrix().cols(); }

double SparseDescription::coefficient(std::size_t i) const
{
    const auto it = std::lower_bound(support_.begin(), support_.end(), i);
    if (it == support_.end() || *it != i) return 0.0;
    return values_[static_cast<std::size_t>(it - support_.begin())];
}

void SparseDescription::add(std::size_t i, double delta)
{
    if (i >= coefficient_dimension()) throw IndexError(i, coefficient_dimension());
    const auto it = std::lower_bound(support_.begin(), support_.end(), i);
    const auto pos = static_cast<std::size_t>(it - support_.begin());
    if (it != support_.end() && *it == i) {
        values_[pos] += delta;
        return;
    }
    support_.insert(it, i);
    values_.insert(values_.begin() + static_cast<std::ptrdiff_t>(pos), delta);
}

std::vector<double> SparseDescription::materialize() const
{
    std::vector<double> x(solution_dimension(), 0.0);
    for (std::size_t k = 0; k < support_.size(); ++k) {
        if (basis_ == DescriptionBasis::rows)
            matrix().axpy_row(support_[k], values_[k], x);
        else
            x[support_[k]] += values_[k];
    }
    return x;
}

std::vector<double> SparseDescription::dense_coefficients() const
{
    std::vector<double> y(coefficient_dimension(), 0.0);
    for (std::size_t k = 0; k < support_.size(); ++k) y[support_[k]] = values_[k];
    return y;
}

double SparseDescription::lambda_norm_sq() const
{
    CompensatedSum acc;
    for (std::size_t k = 0; k < support_.size(); ++k) {
        const double w = basis_ == DescriptionBasis::rows ? matrix().row_norm_sq(support_[k]) : 1.0;
        acc.add(w * values_[k] * values_[k]);
    }
    return acc.value();
}

} // namespace qis
