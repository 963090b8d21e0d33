#include "qisolve/solvers/coordinate_descent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "detail.hpp"
#include "qisolve/errors.hpp"
#include "qisolve/oracle/oracle.hpp"

namespace qis {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();
constexpr double symmetry_tolerance = 1e-10;

std::size_t count_nonzeros(std::span<const double> x)
{
    return static_cast<std::size_t>(std::count_if(x.begin(), x.end(), [](double v) { return v != 0.0; }));
}

} // namespace

SpdOperator SpdOperator::make(const MatrixSQ& a, SpdCheck check)
{
    const std::size_t n = a.rows();
    if (a.cols() != n) throw PreconditionError("SPD solver needs a square matrix");

    const double tol = symmetry_tolerance * a.frobenius();
    for (std::size_t i = 0; i < n; ++i) {
        const VectorSQ& row = a.row(i);
        const auto vals = row.values();
        for (std::size_t p = 0; p < vals.size(); ++p) {
            const std::size_t j = row.is_sparse() ? row.indices()[p] : p;
            if (j <= i) continue;
            if (std::abs(vals[p] - a.entry(j, i)) > tol)
                throw PreconditionError("matrix is not symmetric at (" + std::to_string(i) + ", " +
                                        std::to_string(j) + ")");
        }
    }

    SpdOperator op;
    op.matrix_ = &a;
    op.diagonal_.resize(n);
    std::vector<double> roots(n);
    CompensatedSum tr;
    for (std::size_t i = 0; i < n; ++i) {
        const double aii = a.entry(i, i);
        if (!(aii > 0.0)) throw DegenerateRow(i);
        op.diagonal_[i] = aii;
        roots[i] = std::sqrt(aii);
        tr.add(aii);
    }
    op.trace_ = tr.value();
    op.min_diagonal_ = *std::min_element(op.diagonal_.begin(), op.diagonal_.end());
    op.diag_sqrt_ = VectorSQ::dense(roots);

    if (check == SpdCheck::full) {
        const double lambda_min = oracle::smallest_eigenvalue(a.to_dense());
        if (!(lambda_min > oracle::rank_threshold * a.frobenius()))
            throw PreconditionError("matrix is not positive definite (smallest eigenvalue " +
                                    std::to_string(lambda_min) + ")");
    }
    return op;
}

std::vector<double> coord_descent_step(const SpdOperator& a, std::span<const double> b,
                                       std::span<const double> x, std::size_t r)
{
    const MatrixSQ& m = a.matrix();
    detail::require_rhs(m, b);
    if (x.size() != m.cols()) throw InvalidInput("iterate length does not match column count");
    std::vector<double> next(x.begin(), x.end());
    next[r] -= (m.row_dot(r, x) - b[r]) / a.diagonal(r);
    return next;
}

PrimalResult coord_descent_solve(const SpdOperator& a, std::span<const double> b,
                                 const SolverConfig& cfg, const PrimalObserver& observe)
{
    cfg.validate();
    const MatrixSQ& m = a.matrix();
    detail::require_rhs(m, b);
    detail::TraceRecorder rec(m, b, cfg);
    Rng rows(derive_seed(cfg.seed, detail::row_stream));

    std::vector<double> x(m.cols(), 0.0);
    std::size_t step = 0;
    while (step < cfg.T) {
        const std::size_t r = a.sample_coordinate(rows);
        x[r] -= (m.row_dot(r, x) - b[r]) / a.diagonal(r);
        rec.count_flops(2 * m.row(r).stored());
        ++step;
        if (observe) observe(step, r, x);
        if (rec.wants_record(step)) rec.record(step, x, count_nonzeros(x), nan, nan);
        if (rec.should_stop(step, x)) break;
    }
    return {std::move(x), rec.finish(step)};
}

DualResult averaged_coord_descent_solve(const SpdOperator& a, std::span<const double> b,
                                        const SolverConfig& cfg, const DualObserver& observe)
{
    cfg.validate();
    const MatrixSQ& m = a.matrix();
    detail::require_rhs(m, b);
    detail::TraceRecorder rec(m, b, cfg);
    Rng rows(derive_seed(cfg.seed, detail::row_stream));
    Rng est_rng(derive_seed(cfg.seed, detail::estimator_stream));

    SparseDescription desc(m, DescriptionBasis::identity);
    std::vector<double> x(m.cols(), 0.0);
    const double tr = a.trace();

    std::vector<std::pair<std::size_t, double>> batch(cfg.q);
    std::size_t step = 0;
    while (step < cfg.T) {
        double mu = nan;
        for (auto& [r, delta] : batch) {
            r = a.sample_coordinate(rows);
            const VectorSQ& row = m.row(r);
            const double estimate =
                detail::sampled_average(a.diagonal_distribution(), cfg.d, est_rng, [&](std::size_t j) {
                    if (x[j] == 0.0) return 0.0;
                    return row.query(j) * x[j] * tr / a.diagonal(j);
                });
            if (rec.needs_iterate()) mu = m.row_dot(r, x) - estimate;
            delta = -0.5 * (estimate - b[r]) / a.diagonal(r);
        }
        for (const auto& [r, delta] : batch) {
            desc.add(r, delta);
            x[r] += delta;
        }
        ++step;
        if (observe) observe(step, batch.back().first, desc);
        if (rec.wants_record(step)) rec.record(step, x, desc.size(), desc.lambda_norm_sq(), mu);
        if (rec.should_stop(step, x)) break;
    }
    return {std::move(desc), rec.finish(step)};
}

} // namespace qis
