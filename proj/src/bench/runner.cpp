#include "qisolve/bench/runner.hpp"

#include <algorithm>

#include "qisolve/errors.hpp"
#include "qisolve/solvers/kaczmarz.hpp"
#include "qisolve/solvers/sampled.hpp"
#include "qisolve/solvers/schedules.hpp"

namespace qis::bench {

SolverKind parse_solver(const std::string& name)
{
    if (name == "kaczmarz") return SolverKind::kaczmarz;
    if (name == "dual-sampled") return SolverKind::dual_sampled;
    if (name == "averaged") return SolverKind::averaged;
    if (name == "cd") return SolverKind::cd;
    if (name == "cd-averaged") return SolverKind::cd_averaged;
    throw InvalidInput("unknown solver '" + name + "'");
}

std::string to_string(SolverKind kind)
{
    switch (kind) {
    case SolverKind::kaczmarz: return "kaczmarz";
    case SolverKind::dual_sampled: return "dual-sampled";
    case SolverKind::averaged: return "averaged";
    case SolverKind::cd: return "cd";
    case SolverKind::cd_averaged: return "cd-averaged";
    }
    return "unknown";
}

bool needs_spd(SolverKind kind) noexcept { return kind == SolverKind::cd || kind == SolverKind::cd_averaged; }

bool returns_description(SolverKind kind) noexcept
{
    return kind == SolverKind::dual_sampled || kind == SolverKind::averaged || kind == SolverKind::cd_averaged;
}

SolverConfig configure(SolverKind kind, SolverConfig cfg, const MatrixSQ& a,
                       const oracle::SpectralSummary& spectrum, const SpdOperator* spd, bool schedule)
{
    if (spectrum.rank == 0) throw PreconditionError("matrix has rank zero");
    /// Rank-one and flat instances can land a rounding error below 1.
    cfg.kappa = std::max(1.0, spectrum.kappa);
    cfg.kappa_f = std::max(cfg.kappa, spectrum.kappa_f);
    cfg.inv_norm = spectrum.inv_norm;
    if (!schedule) return cfg;
    if (needs_spd(kind) && spd == nullptr) throw PreconditionError("SPD schedule needs the SPD operator");
    switch (kind) {
    case SolverKind::kaczmarz: return with_kaczmarz_schedule(cfg);
    case SolverKind::dual_sampled: return with_basic_schedule(cfg, a);
    case SolverKind::averaged: return with_averaged_schedule(cfg, a);
    case SolverKind::cd: return with_cd_schedule(cfg, *spd);
    case SolverKind::cd_averaged: return with_cd_averaged_schedule(cfg, *spd);
    }
    return cfg;
}

SolveOutcome run_solver(SolverKind kind, const MatrixSQ& a, std::span<const double> b,
                        const SolverConfig& cfg, const SpdOperator* spd)
{
    std::optional<SpdOperator> owned;
    if (needs_spd(kind) && spd == nullptr) {
        owned = SpdOperator::make(a, SpdCheck::full);
        spd = &*owned;
    }

    SolveOutcome out;
    auto take_dual = [&](DualResult r) {
        out.x = r.y.materialize();
        out.description = std::move(r.y);
        out.trace = std::move(r.trace);
    };
    auto take_primal = [&](PrimalResult r) {
        out.x = std::move(r.x);
        out.trace = std::move(r.trace);
    };

    switch (kind) {
    case SolverKind::kaczmarz: take_primal(kaczmarz_solve(a, b, cfg)); break;
    case SolverKind::dual_sampled: take_dual(dual_kaczmarz_sampled_solve(a, b, cfg)); break;
    case SolverKind::averaged: take_dual(averaged_kaczmarz_sampled_solve(a, b, cfg)); break;
    case SolverKind::cd: take_primal(coord_descent_solve(*spd, b, cfg)); break;
    case SolverKind::cd_averaged: take_dual(averaged_coord_descent_solve(*spd, b, cfg)); break;
    }
    return out;
}

} // namespace qis::bench
