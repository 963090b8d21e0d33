#include "qisolve/solvers/sampled.hpp"

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "detail.hpp"
#include "qisolve/errors.hpp"

namespace qis {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

void require_rows_description(const MatrixSQ& a, const SparseDescription& y)
{
    if (!y.has_matrix() || &y.matrix() != &a || y.basis() != DescriptionBasis::rows)
        throw InvalidInput("description does not belong to this matrix");
}

/// (1/d) sum_{j in S} A_{r,j} x_j ||A||_F^2 / ||A_{*j}||^2, an unbiased
/// estimate of <A_{r*}, x> (not normalised by ||A_{r*}||).
double estimate_row_product(const MatrixSQ& a, std::size_t r, std::uint64_t d, Rng& rng,
                            detail::ColumnValues& x)
{
    const VectorSQ& row = a.row(r);
    const double fro_sq = a.frobenius_sq();
    return detail::sampled_average(a.column_norms(), d, rng, [&](std::size_t j) {
        const double arj = row.query(j);
        if (arj == 0.0) return 0.0;
        return arj * x(j) * fro_sq / a.column_norm_sq(j);
    });
}

double row_norm_checked(const MatrixSQ& a, std::size_t r)
{
    const double w = a.row_norm_sq(r);
    if (!(w > 0.0)) throw DegenerateRow(r);
    return std::sqrt(w);
}

} // namespace

double sampled_inner_product(const MatrixSQ& a, std::size_t r, const SparseDescription& y,
                             std::uint64_t d, Rng& rng)
{
    require_rows_description(a, y);
    if (d < 1) throw InvalidInput("sample count d must be at least 1");
    const double norm = row_norm_checked(a, r);
    detail::ColumnValues x(a, y);
    return estimate_row_product(a, r, d, rng, x) / norm;
}

SampledStep dual_kaczmarz_sampled_step(const MatrixSQ& a, std::span<const double> b,
                                       const SparseDescription& y, std::size_t r, std::uint64_t d,
                                       Rng& rng)
{
    detail::require_rhs(a, b);
    require_rows_description(a, y);
    const double norm = row_norm_checked(a, r);
    const double estimate = sampled_inner_product(a, r, y, d, rng);
    const std::vector<double> x = y.materialize();
    const double exact = a.row_dot(r, x) / norm;

    SampledStep out{y, estimate, exact - estimate};
    out.y.add(r, (b[r] / norm - estimate) / norm);
    return out;
}

DualResult dual_kaczmarz_sampled_solve(const MatrixSQ& a, std::span<const double> b,
                                       const SolverConfig& cfg, const DualObserver& observe)
{
    cfg.validate();
    detail::require_rhs(a, b);
    detail::TraceRecorder rec(a, b, cfg);
    Rng rows(derive_seed(cfg.seed, detail::row_stream));
    Rng est_rng(derive_seed(cfg.seed, detail::estimator_stream));

    SparseDescription y(a);
    detail::ColumnValues columns(a, y);
    std::vector<double> x;
    if (rec.needs_iterate()) x.assign(a.cols(), 0.0);

    std::size_t step = 0;
    while (step < cfg.T) {
        const std::size_t r = a.sample_row(rows);
        const double norm = row_norm_checked(a, r);
        const double estimate = estimate_row_product(a, r, cfg.d, est_rng, columns) / norm;
        const double mu = x.empty() ? nan : a.row_dot(r, x) / norm - estimate;
        const double delta = (b[r] / norm - estimate) / norm;

        y.add(r, delta);
        columns.next_step();
        if (!x.empty()) a.axpy_row(r, delta, x);
        ++step;
        if (observe) observe(step, r, y);
        if (rec.wants_record(step)) rec.record(step, x, y.size(), y.lambda_norm_sq(), mu);
        if (rec.should_stop(step, x)) break;
    }
    return {std::move(y), rec.finish(step)};
}

DualResult averaged_kaczmarz_sampled_solve(const MatrixSQ& a, std::span<const double> b,
                                           const SolverConfig& cfg, const DualObserver& observe)
{
    cfg.validate();
    detail::require_rhs(a, b);
    detail::TraceRecorder rec(a, b, cfg);
    Rng rows(derive_seed(cfg.seed, detail::row_stream));
    Rng est_rng(derive_seed(cfg.seed, detail::estimator_stream));

    SparseDescription y(a);
    detail::ColumnValues columns(a, y);
    std::vector<double> x;
    if (rec.needs_iterate()) x.assign(a.cols(), 0.0);

    std::vector<std::pair<std::size_t, double>> batch(cfg.q);
    std::size_t step = 0;
    while (step < cfg.T) {
        double mu = nan;
        // Every estimate in the batch reads y_k; updates are applied afterwards.
        for (auto& [r, delta] : batch) {
            r = a.sample_row(rows);
            const double norm = row_norm_checked(a, r);
            const double estimate = estimate_row_product(a, r, cfg.d, est_rng, columns) / norm;
            if (!x.empty()) mu = a.row_dot(r, x) / norm - estimate;
            delta = 0.5 * (b[r] / norm - estimate) / norm;
        }
        for (const auto& [r, delta] : batch) {
            y.add(r, delta);
            if (!x.empty()) a.axpy_row(r, delta, x);
        }
        columns.next_step();
        ++step;
        if (observe) observe(step, batch.back().first, y);
        if (rec.wants_record(step)) rec.record(step, x, y.size(), y.lambda_norm_sq(), mu);
        if (rec.should_stop(step, x)) break;
    }
    return {std::move(y), rec.finish(step)};
}

} // namespace qis
