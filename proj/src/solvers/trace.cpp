#include <cmath>

#include "detail.hpp"
#include "qisolve/errors.hpp"

namespace qis::detail {

namespace {

constexpr std::size_t exact_residual_limit = 1'000'000;  // m*n
constexpr std::size_t residual_samples = 256;

} // namespace

double residual_norm(const MatrixSQ& a, std::span<const double> b, std::span<const double> x)
{
    CompensatedSum acc;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double r = a.row_dot(i, x) - b[i];
        acc.add(r * r);
    }
    return std::sqrt(acc.value());
}

void require_rhs(const MatrixSQ& a, std::span<const double> b)
{
    if (b.size() != a.rows()) throw InvalidInput("right-hand side length does not match row count");
    for (double v : b)
        if (!std::isfinite(v)) throw InvalidInput("non-finite right-hand side entry");
}

TraceRecorder::TraceRecorder(const MatrixSQ& a, std::span<const double> b, const SolverConfig& cfg)
    : a_(a), b_(b), cfg_(cfg), residual_rng_(derive_seed(cfg.seed, residual_stream))
{
    trace_.optimal_residual = cfg.optimal_residual;
    check_every_ = static_cast<std::size_t>((cfg.T + 19) / 20);
    if (!cfg.reference_solution.empty() && cfg.reference_solution.size() != a.cols())
        throw InvalidInput("reference solution length does not match column count");
}

void TraceRecorder::record(std::size_t step, std::span<const double> x, std::size_t support_size,
                           double lambda_norm_sq, double mu)
{
    TraceRecord rec;
    rec.step = step;
    rec.residual_norm = residual_norm(a_, b_, x);
    if (!cfg_.reference_solution.empty()) {
        CompensatedSum acc;
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double e = x[j] - cfg_.reference_solution[j];
            acc.add(e * e);
        }
        rec.error_norm = std::sqrt(acc.value());
    }
    rec.support_size = support_size;
    rec.lambda_norm_sq = lambda_norm_sq;
    rec.mu = mu;
    rec.inner_product_flops = last_flops_;
    trace_.records.push_back(rec);
}

bool TraceRecorder::should_stop(std::size_t step, std::span<const double> x)
{
    if (!cfg_.stop_tolerance || step % check_every_ != 0) return false;
    double res;
    if (a_.rows() * a_.cols() <= exact_residual_limit) {
        res = residual_norm(a_, b_, x);
    } else {
        // Uniform row sampling: m * mean of squared row residuals is unbiased.
        double s = 0.0;
        for (std::size_t t = 0; t < residual_samples; ++t) {
            const std::size_t i = residual_rng_.uniform_index(a_.rows());
            const double r = a_.row_dot(i, x) - b_[i];
            s += r * r;
        }
        res = std::sqrt(static_cast<double>(a_.rows()) * s / residual_samples);
    }
    return res <= *cfg_.stop_tolerance;
}

IterationTrace TraceRecorder::finish(std::size_t iterations)
{
    trace_.iterations = iterations;
    trace_.stopped_early = iterations < cfg_.T;
    return std::move(trace_);
}

} // namespace qis::detail
