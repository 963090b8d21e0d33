#pragma once

#include <span>
#include <vector>

#include "qisolve/solvers/types.hpp"

namespace qis {

enum class SpdCheck {
    full,     ///< symmetry, positive diagonal and smallest eigenvalue > 0
    trusted,  ///< symmetry and positive diagonal only (large generated inputs)
};

/// A MatrixSQ that has been checked to be symmetric positive definite, plus
/// SQ access to (sqrt(A_11), ..., sqrt(A_nn)) so coordinates can be drawn
/// with probability A_rr / Tr(A).
class SpdOperator {
public:
    /// Throws PreconditionError when A is not square, not symmetric to 1e-10
    /// relative, or (with SpdCheck::full) not positive definite. Throws
    /// DegenerateRow when a diagonal entry is not positive.
    static SpdOperator make(const MatrixSQ& a, SpdCheck check = SpdCheck::full);

    const MatrixSQ& matrix() const noexcept { return *matrix_; }
    std::size_t size() const noexcept { return matrix_->rows(); }
    double trace() const noexcept { return trace_; }
    double diagonal(std::size_t i) const { return diagonal_.at(i); }
    double min_diagonal() const noexcept { return min_diagonal_; }
    const VectorSQ& diagonal_distribution() const noexcept { return diag_sqrt_; }
    std::size_t sample_coordinate(Rng& rng) const { return diag_sqrt_.sample(rng); }

private:
    const MatrixSQ* matrix_ = nullptr;
    std::vector<double> diagonal_;
    VectorSQ diag_sqrt_;
    double trace_ = 0.0;
    double min_diagonal_ = 0.0;
};

/// x' = x - (<A_{r*}, x> - b_r) / A_rr * e_r; zeroes residual coordinate r.
std::vector<double> coord_descent_step(const SpdOperator& a, std::span<const double> b,
                                       std::span<const double> x, std::size_t r);

/// Randomized coordinate descent from x_0 = 0 for cfg.T steps with
/// Pr[r] = A_rr / Tr(A).
PrimalResult coord_descent_solve(const SpdOperator& a, std::span<const double> b,
                                 const SolverConfig& cfg, const PrimalObserver& observe = {});

/// Averaged coordinate descent with sampled inner products:
///   x += 1/2 sum_{i in batch} (b_i - est_i) / A_ii e_i
/// est_i = (1/d) sum_{j in S_i} A_ij x_j Tr(A) / A_jj, S_i drawn with
/// probability A_jj / Tr(A). Returns x as an identity-basis description.
DualResult averaged_coord_descent_solve(const SpdOperator& a, std::span<const double> b,
                                        const SolverConfig& cfg,
                                        const DualObserver& observe = {});

} // namespace qis
