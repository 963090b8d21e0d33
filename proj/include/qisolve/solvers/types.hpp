#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "qisolve/sqcore/matrix_sq.hpp"

namespace qis {

/// Parameters shared by every solver. kappa and kappa_f are supplied by the
/// caller (the bench computes them with the oracle); solvers never estimate
/// spectra themselves.
struct SolverConfig {
    double epsilon = 0.1;       ///< target relative error, in (0, 1]
    double delta = 0.01;        ///< failure probability, in (0, 1)
    double kappa = 1.0;         ///< ||A|| ||A^-1||
    double kappa_f = 1.0;       ///< ||A||_F ||A^-1||
    double inv_norm = 1.0;      ///< ||A^-1||; used by the SPD schedules
    std::uint64_t d = 1;        ///< inner-product sample count
    std::uint64_t T = 1;        ///< iteration count
    std::uint64_t q = 1;        ///< batch size of the averaged variants
    std::uint64_t seed = 0;
    bool track_trace = false;
    std::size_t trace_stride = 1;

    /// x* for error tracking; empty when unknown.
    std::vector<double> reference_solution;
    /// Optimal residual ||Ax* - b||, recorded in the trace when known.
    std::optional<double> optimal_residual;

    /// Optional early stop once ||Ax_k - b|| <= stop_tolerance, checked every
    /// ceil(T/20) steps. Off by default.
    std::optional<double> stop_tolerance;

    /// Throws InvalidInput when a field is outside its domain.
    void validate() const;
};

/// How a SparseDescription maps its coefficients y to x.
enum class DescriptionBasis {
    rows,      ///< x = A^T y  (Kaczmarz family; support indexes rows)
    identity,  ///< x = y      (coordinate descent; support indexes coordinates)
};

/// A sparse vector y with the matrix that turns it into the solution x.
/// Non-owning: the MatrixSQ must outlive the description.
class SparseDescription {
public:
    SparseDescription() = default;
    SparseDescription(const MatrixSQ& matrix, DescriptionBasis basis = DescriptionBasis::rows);

    /// Throws InvalidInput if support is not strictly increasing or out of range.
    SparseDescription(const MatrixSQ& matrix, std::vector<std::size_t> support,
                      std::vector<double> values,
                      DescriptionBasis basis = DescriptionBasis::rows);

    const MatrixSQ& matrix() const { return *matrix_; }
    bool has_matrix() const noexcept { return matrix_ != nullptr; }
    DescriptionBasis basis() const noexcept { return basis_; }

    /// Dimension of y (m for rows basis, n for identity basis).
    std::size_t coefficient_dimension() const;
    /// Dimension of x.
    std::size_t solution_dimension() const;

    std::span<const std::size_t> support() const noexcept { return support_; }
    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return support_.size(); }
    bool empty() const noexcept { return support_.empty(); }

    double coefficient(std::size_t i) const;
    /// y_i += delta, inserting i into the support if needed.
    void add(std::size_t i, double delta);

    /// Dense x.
    std::vector<double> materialize() const;
    /// Dense y of length coefficient_dimension().
    std::vector<double> dense_coefficients() const;

    /// sum_i ||A_{i*}||^2 y_i^2 (rows basis) or sum_i y_i^2 (identity basis).
    double lambda_norm_sq() const;

private:
    const MatrixSQ* matrix_ = nullptr;
    DescriptionBasis basis_ = DescriptionBasis::rows;
    std::vector<std::size_t> support_;
    std::vector<double> values_;
};

struct TraceRecord {
    std::size_t step = 0;           ///< iterations completed
    double residual_norm = 0.0;     ///< ||A x_k - b||
    double error_norm = std::numeric_limits<double>::quiet_NaN();  ///< ||x_k - x*||
    std::size_t support_size = 0;   ///< |supp(y_k)|, or nnz(x_k) for primal solvers
    double lambda_norm_sq = 0.0;    ///< ||y_k||_Lambda^2
    double mu = std::numeric_limits<double>::quiet_NaN();  ///< estimator error of the last step
    std::uint64_t inner_product_flops = 0;  ///< flops of the last step's inner products
};

struct IterationTrace {
    std::vector<TraceRecord> records;
    std::optional<double> optimal_residual;
    std::uint64_t max_step_flops = 0;
    std::uint64_t total_flops = 0;
    std::size_t iterations = 0;
    bool stopped_early = false;
};

struct PrimalResult {
    std::vector<double> x;
    IterationTrace trace;
};

struct DualResult {
    SparseDescription y;
    IterationTrace trace;
};

using PrimalObserver = std::function<void(std::size_t step, std::size_t row, std::span<const double> x)>;
using DualObserver = std::function<void(std::size_t step, std::size_t row, const SparseDescription& y)>;

} // namespace qis
