#pragma once

#include <cstdint>
#include <span>

#include "qisolve/solvers/types.hpp"

namespace qis {

/// Monte Carlo estimate of <Ã_{r*}, A^T y> where Ã_{r*} = A_{r*}/||A_{r*}||:
///   (1/d) sum_{j in S} Ã_{r,j} <A_{*j}, y> ||A||_F^2 / ||A_{*j}||^2
/// with S a multiset of d columns drawn i.i.d. with probability
/// ||A_{*j}||^2 / ||A||_F^2. Unbiased.
///
/// When d exceeds the number of columns the estimator is evaluated from
/// multinomial column counts, which has the same law as d i.i.d. draws.
double sampled_inner_product(const MatrixSQ& a, std::size_t r, const SparseDescription& y,
                             std::uint64_t d, Rng& rng);

struct SampledStep {
    SparseDescription y;
    double estimate = 0.0;  ///< sampled <Ã_{r*}, x>
    double mu = 0.0;        ///< exact <Ã_{r*}, x> - estimate
};

/// y' = y + (b̃_r - estimate) / ||A_{r*}|| * e_r
SampledStep dual_kaczmarz_sampled_step(const MatrixSQ& a, std::span<const double> b,
                                       const SparseDescription& y, std::size_t r, std::uint64_t d,
                                       Rng& rng);

/// Dual Kaczmarz with sampled inner products. |supp(y_T)| <= T.
DualResult dual_kaczmarz_sampled_solve(const MatrixSQ& a, std::span<const double> b,
                                       const SolverConfig& cfg, const DualObserver& observe = {});

/// Averaged (minibatch) variant: each step draws cfg.q rows with replacement
/// and applies
///   y += 1/2 sum_{i in batch} (b̃_i - est_i) / ||A_{i*}|| e_i
/// where every est_i uses its own column sample and the same y_k.
/// |supp(y_T)| <= q*T.
DualResult averaged_kaczmarz_sampled_solve(const MatrixSQ& a, std::span<const double> b,
                                           const SolverConfig& cfg,
                                           const DualObserver& observe = {});

} // namespace qis
