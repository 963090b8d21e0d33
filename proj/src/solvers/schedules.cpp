#include "qisolve/solvers/schedules.hpp"

#include <cmath>
#include <limits>

#include "qisolve/errors.hpp"
#include "qisolve/solvers/coordinate_descent.hpp"

namespace qis {

namespace {

std::uint64_t ceil_count(double v)
{
    if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidInput("schedule produced a non-finite count");
    constexpr double cap = 0x1.0p62;
    if (v >= cap) throw InvalidInput("schedule count overflows 2^62");
    const double c = std::ceil(v);
    return c < 1.0 ? 1 : static_cast<std::uint64_t>(c);
}

double eps_squared(const SolverConfig& cfg)
{
    if (!(cfg.epsilon > 0.0 && cfg.epsilon <= 1.0)) throw InvalidInput("epsilon must lie in (0, 1]");
    return cfg.epsilon * cfg.epsilon;
}

double log_two_over_eps_sq(const SolverConfig& cfg) { return std::log(2.0 / eps_squared(cfg)); }

double spectral_norm_sq(const SolverConfig& cfg, const MatrixSQ& a)
{
    return a.frobenius_sq() * (cfg.kappa * cfg.kappa) / (cfg.kappa_f * cfg.kappa_f);
}

} // namespace

std::uint64_t compute_T_kaczmarz(const SolverConfig& cfg)
{
    const double eps_sq = eps_squared(cfg);
    return ceil_count(cfg.kappa_f * cfg.kappa_f * std::log(100.0 / eps_sq));
}

std::uint64_t compute_T_basic(const SolverConfig& cfg)
{
    return ceil_count(cfg.kappa_f * cfg.kappa_f * log_two_over_eps_sq(cfg));
}

std::uint64_t compute_d_basic(const SolverConfig& cfg, const MatrixSQ& a)
{
    const double eps_sq = eps_squared(cfg);
    return ceil_count(4.0 * a.frobenius_sq() * cfg.kappa_f * cfg.kappa_f * log_two_over_eps_sq(cfg) /
                      (eps_sq * a.min_column_norm_sq()));
}

std::uint64_t compute_T_averaged(const SolverConfig& cfg)
{
    return ceil_count(2.0 * cfg.kappa * cfg.kappa * log_two_over_eps_sq(cfg));
}

std::uint64_t compute_d_averaged(const SolverConfig& cfg, const MatrixSQ& a)
{
    const double T = static_cast<double>(compute_T_averaged(cfg));
    const double eps_sq = eps_squared(cfg);
    const double fro_sq = a.frobenius_sq();
    return ceil_count(fro_sq * fro_sq * T /
                      (eps_sq * spectral_norm_sq(cfg, a) * a.min_column_norm_sq()));
}

std::uint64_t compute_q_averaged(const SolverConfig& cfg)
{
    const double ratio = (cfg.kappa_f * cfg.kappa_f) / (cfg.kappa * cfg.kappa);
    const double q = std::round(ratio);
    return q < 1.0 ? 1 : static_cast<std::uint64_t>(q);
}

std::uint64_t compute_T_cd(const SolverConfig& cfg, const SpdOperator& a)
{
    const double eps_sq = eps_squared(cfg);
    return ceil_count(a.trace() * cfg.inv_norm * std::log(100.0 / eps_sq));
}

std::uint64_t compute_T_cd_averaged(const SolverConfig& cfg)
{
    return ceil_count(2.0 * cfg.kappa * log_two_over_eps_sq(cfg));
}

std::uint64_t compute_q_cd_averaged(const SolverConfig& cfg, const SpdOperator& a)
{
    const double spectral = cfg.kappa / cfg.inv_norm;
    const double q = std::round(a.trace() / spectral);
    return q < 1.0 ? 1 : static_cast<std::uint64_t>(q);
}

std::uint64_t compute_d_cd_averaged(const SolverConfig& cfg, const SpdOperator& a)
{
    const double T = static_cast<double>(compute_T_cd_averaged(cfg));
    const double eps_sq = eps_squared(cfg);
    const double spectral = cfg.kappa / cfg.inv_norm;
    return ceil_count(a.trace() * a.trace() * T / (eps_sq * spectral * a.min_diagonal()));
}

SolverConfig with_basic_schedule(SolverConfig cfg, const MatrixSQ& a)
{
    cfg.T = compute_T_basic(cfg);
    cfg.d = compute_d_basic(cfg, a);
    return cfg;
}

SolverConfig with_averaged_schedule(SolverConfig cfg, const MatrixSQ& a)
{
    cfg.T = compute_T_averaged(cfg);
    cfg.d = compute_d_averaged(cfg, a);
    cfg.q = compute_q_averaged(cfg);
    return cfg;
}

SolverConfig with_kaczmarz_schedule(SolverConfig cfg)
{
    cfg.T = compute_T_kaczmarz(cfg);
    return cfg;
}

SolverConfig with_cd_schedule(SolverConfig cfg, const SpdOperator& a)
{
    cfg.T = compute_T_cd(cfg, a);
    return cfg;
}

SolverConfig with_cd_averaged_schedule(SolverConfig cfg, const SpdOperator& a)
{
    cfg.T = compute_T_cd_averaged(cfg);
    cfg.d = compute_d_cd_averaged(cfg, a);
    cfg.q = compute_q_cd_averaged(cfg, a);
    return cfg;
}

} // namespace qis
