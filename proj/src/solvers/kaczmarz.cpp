#include "qisolve/solvers/kaczmarz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "detail.hpp"
#include "qisolve/errors.hpp"

namespace qis {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

std::size_t count_nonzeros(std::span<const double> x)
{
    return static_cast<std::size_t>(std::count_if(x.begin(), x.end(), [](double v) { return v != 0.0; }));
}

double checked_row_norm_sq(const MatrixSQ& a, std::size_t r)
{
    const double w = a.row_norm_sq(r);
    if (!(w > 0.0)) throw DegenerateRow(r);
    return w;
}

/// <A_{r*}, A^T y> evaluated exactly over supp(y).
double exact_dual_inner(const MatrixSQ& a, const SparseDescription& y, std::size_t r)
{
    const auto sup = y.support();
    const auto vals = y.values();
    double s = 0.0;
    for (std::size_t k = 0; k < sup.size(); ++k) s += vals[k] * a.row_dot_row(r, sup[k]);
    return s;
}

} // namespace

std::vector<double> kaczmarz_step(const MatrixSQ& a, std::span<const double> b,
                                  std::span<const double> x, std::size_t r)
{
    detail::require_rhs(a, b);
    if (x.size() != a.cols()) throw InvalidInput("iterate length does not match column count");
    const double w = checked_row_norm_sq(a, r);
    std::vector<double> next(x.begin(), x.end());
    a.axpy_row(r, (b[r] - a.row_dot(r, x)) / w, next);
    return next;
}

PrimalResult kaczmarz_solve(const MatrixSQ& a, std::span<const double> b, const SolverConfig& cfg,
                            const PrimalObserver& observe)
{
    cfg.validate();
    detail::require_rhs(a, b);
    detail::TraceRecorder rec(a, b, cfg);
    Rng rows(derive_seed(cfg.seed, detail::row_stream));

    std::vector<double> x(a.cols(), 0.0);
    std::size_t step = 0;
    while (step < cfg.T) {
        const std::size_t r = a.sample_row(rows);
        const double w = checked_row_norm_sq(a, r);
        a.axpy_row(r, (b[r] - a.row_dot(r, x)) / w, x);
        rec.count_flops(2 * a.row(r).stored());
        ++step;
        if (observe) observe(step, r, x);
        if (rec.wants_record(step)) rec.record(step, x, count_nonzeros(x), nan, nan);
        if (rec.should_stop(step, x)) break;
    }
    return {std::move(x), rec.finish(step)};
}

SparseDescription dual_kaczmarz_step(const MatrixSQ& a, std::span<const double> b,
                                     const SparseDescription& y, std::size_t r)
{
    detail::require_rhs(a, b);
    if (&y.matrix() != &a || y.basis() != DescriptionBasis::rows)
        throw InvalidInput("description does not belong to this matrix");
    const double w = checked_row_norm_sq(a, r);
    SparseDescription next = y;
    next.add(r, (b[r] - exact_dual_inner(a, y, r)) / w);
    return next;
}

DualResult dual_kaczmarz_solve(const MatrixSQ& a, std::span<const double> b, const SolverConfig& cfg,
                               const DualObserver& observe)
{
    cfg.validate();
    detail::require_rhs(a, b);
    detail::TraceRecorder rec(a, b, cfg);
    Rng rows(derive_seed(cfg.seed, detail::row_stream));

    SparseDescription y(a);
    std::vector<double> x;
    if (rec.needs_iterate()) x.assign(a.cols(), 0.0);

    std::size_t step = 0;
    while (step < cfg.T) {
        const std::size_t r = a.sample_row(rows);
        const double w = checked_row_norm_sq(a, r);
        const double delta = (b[r] - exact_dual_inner(a, y, r)) / w;
        rec.count_flops(2 * y.size() * a.row(r).stored());
        y.add(r, delta);
        if (!x.empty()) a.axpy_row(r, delta, x);
        ++step;
        if (observe) observe(step, r, y);
        if (rec.wants_record(step)) rec.record(step, x, y.size(), y.lambda_norm_sq(), nan);
        if (rec.should_stop(step, x)) break;
    }
    return {std::move(y), rec.finish(step)};
}

} // namespace qis
