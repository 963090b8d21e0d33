#pragma once

#include <cstdint>

#include "qisolve/solvers/types.hpp"

namespace qis {

class SpdOperator;

// Iteration and sample-count schedules. Every log is natural and every count
// is rounded up.

/// ceil(kappa_f^2 ln(100/eps^2)): plain Kaczmarz, error <= eps ||x*|| w.p. 0.99.
std::uint64_t compute_T_kaczmarz(const SolverConfig& cfg);

/// ceil(kappa_f^2 ln(2/eps^2))
std::uint64_t compute_T_basic(const SolverConfig& cfg);

/// ceil(4 ||A||_F^2 kappa_f^2 ln(2/eps^2) / (eps^2 min_j ||A_{*j}||^2))
std::uint64_t compute_d_basic(const SolverConfig& cfg, const MatrixSQ& a);

/// ceil(2 kappa^2 ln(2/eps^2)); the 2 comes from the per-step rate 1 - 1/(2 kappa^2).
std::uint64_t compute_T_averaged(const SolverConfig& cfg);

/// ceil(||A||_F^4 T / (eps^2 ||A||^2 min_j ||A_{*j}||^2)) with T = compute_T_averaged(cfg)
/// and ||A||^2 = ||A||_F^2 kappa^2 / kappa_f^2.
std::uint64_t compute_d_averaged(const SolverConfig& cfg, const MatrixSQ& a);

/// max(1, round(||A||_F^2 / ||A||^2)) = max(1, round(kappa_f^2 / kappa^2))
std::uint64_t compute_q_averaged(const SolverConfig& cfg);

/// ceil(Tr(A) ||A^-1|| ln(100/eps^2))
std::uint64_t compute_T_cd(const SolverConfig& cfg, const SpdOperator& a);

/// ceil(2 kappa ln(2/eps^2))
std::uint64_t compute_T_cd_averaged(const SolverConfig& cfg);

/// max(1, round(Tr(A) / ||A||)) with ||A|| = kappa / inv_norm
std::uint64_t compute_q_cd_averaged(const SolverConfig& cfg, const SpdOperator& a);

/// ceil(Tr(A)^2 T / (eps^2 ||A|| min_j A_jj)) with T = compute_T_cd_averaged(cfg)
std::uint64_t compute_d_cd_averaged(const SolverConfig& cfg, const SpdOperator& a);

/// Copies of cfg with T, d (and q) filled from the schedules above.
SolverConfig with_basic_schedule(SolverConfig cfg, const MatrixSQ& a);
SolverConfig with_averaged_schedule(SolverConfig cfg, const MatrixSQ& a);
SolverConfig with_kaczmarz_schedule(SolverConfig cfg);
SolverConfig with_cd_schedule(SolverConfig cfg, const SpdOperator& a);
SolverConfig with_cd_averaged_schedule(SolverConfig cfg, const SpdOperator& a);

} // namespace qis
