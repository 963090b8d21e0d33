#pragma once

#include <span>
#include <vector>

#include "qisolve/solvers/types.hpp"

namespace qis {

/// One projection of x onto the hyperplane <A_{r*}, x> = b_r:
///   x' = x + (b_r - <A_{r*}, x>) / ||A_{r*}||^2 * A_{r*}
/// Throws DegenerateRow when A_{r*} = 0.
std::vector<double> kaczmarz_step(const MatrixSQ& a, std::span<const double> b,
                                  std::span<const double> x, std::size_t r);

/// Randomized Kaczmarz from x_0 = 0 for cfg.T steps, rows drawn with
/// probability ||A_{i*}||^2 / ||A||_F^2. Inner products touch only the stored
/// entries of each row, so a row-sparse matrix costs O(s) per step and x_T
/// has at most s*T nonzeros.
PrimalResult kaczmarz_solve(const MatrixSQ& a, std::span<const double> b, const SolverConfig& cfg,
                            const PrimalObserver& observe = {});

/// Dual coordinate step with the exact inner product <A_{r*}, A^T y>:
///   y' = y + (b_r - <A_{r*}, A^T y>) / ||A_{r*}||^2 * e_r
SparseDescription dual_kaczmarz_step(const MatrixSQ& a, std::span<const double> b,
                                     const SparseDescription& y, std::size_t r);

/// Exact dual Kaczmarz. With the same seed it draws the same rows as
/// kaczmarz_solve, and A^T y_k reproduces the primal iterates.
DualResult dual_kaczmarz_solve(const MatrixSQ& a, std::span<const double> b, const SolverConfig& cfg,
                               const DualObserver& observe = {});

} // namespace qis
