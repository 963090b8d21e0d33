#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qisolve/oracle/oracle.hpp"
#include "qisolve/solvers/coordinate_descent.hpp"
#include "qisolve/solvers/types.hpp"

namespace qis::bench {

enum class SolverKind { kaczmarz, dual_sampled, averaged, cd, cd_averaged };

/// Accepts the CLI spellings: kaczmarz, dual-sampled, averaged, cd, cd-averaged.
SolverKind parse_solver(const std::string& name);
std::string to_string(SolverKind kind);
bool needs_spd(SolverKind kind) noexcept;
/// True for solvers that return a sparse description rather than a dense x.
bool returns_description(SolverKind kind) noexcept;

/// Copies kappa, kappa_f and ||A^-1|| from the spectrum into cfg and, when
/// `schedule` is set, fills T (and d, q where they apply) from the solver's
/// schedule. `spd` is required for the coordinate-descent solvers.
SolverConfig configure(SolverKind kind, SolverConfig cfg, const MatrixSQ& a,
                       const oracle::SpectralSummary& spectrum, const SpdOperator* spd,
                       bool schedule = true);

struct SolveOutcome {
    std::vector<double> x;
    std::optional<SparseDescription> description;
    IterationTrace trace;
};

/// Runs one solver. For the SPD solvers `spd` may be null, in which case the
/// operator is built with the full positive-definiteness check.
SolveOutcome run_solver(SolverKind kind, const MatrixSQ& a, std::span<const double> b,
                        const SolverConfig& cfg, const SpdOperator* spd = nullptr);

} // namespace qis::bench
