#pragma once

// Internal helpers shared by the solver translation units.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "qisolve/errors.hpp"
#include "qisolve/rng.hpp"
#include "qisolve/solvers/types.hpp"

namespace qis::detail {

/// Sub-stream indices under SolverConfig::seed.
inline constexpr std::uint64_t row_stream = 0;
inline constexpr std::uint64_t estimator_stream = 1;
inline constexpr std::uint64_t residual_stream = 2;

/// (1/d) sum_{s=1..d} term(j_s) with j_s ~ D_dist i.i.d.
///
/// For d above the support size the draw is replaced by multinomial counts
/// (sequential conditional binomials): the estimator only depends on how
/// often each index was hit, so the law is unchanged and the cost drops to
/// O(n) binomials plus one term() call per hit index.
template <class Term>
double sampled_average(const VectorSQ& dist, std::uint64_t d, Rng& rng, Term&& term)
{
    if (d <= dist.stored()) {
        double s = 0.0;
        for (std::uint64_t t = 0; t < d; ++t) s += term(dist.sample(rng));
        return s / static_cast<double>(d);
    }
    const auto vals = dist.values();
    const auto idx = dist.indices();
    const double total = dist.squared_norm();
    std::size_t last = vals.size();
    while (last > 0 && vals[last - 1] == 0.0) --last;
    if (last == 0) throw EmptyDistribution("cannot sample from a zero vector");

    std::uint64_t remaining = d;
    double mass = total;
    double s = 0.0;
    for (std::size_t p = 0; p < last && remaining > 0; ++p) {
        const double w = vals[p] * vals[p];
        if (w == 0.0) continue;
        std::uint64_t c;
        if (p + 1 == last) {
            c = remaining;
        } else {
            const double prob = mass > 0.0 ? std::min(1.0, w / mass) : 1.0;
            c = rng.binomial(remaining, prob);
        }
        mass -= w;
        remaining -= c;
        if (c > 0) s += static_cast<double>(c) * term(dist.is_sparse() ? idx[p] : p);
    }
    return s / static_cast<double>(d);
}

/// Lazily evaluates x_j = <A_{*j}, y> = sum_{i in supp(y)} y_i A_{i,j} with a
/// per-step cache, so repeated hits on a column cost one evaluation.
class ColumnValues {
public:
    ColumnValues(const MatrixSQ& a, const SparseDescription& y)
        : a_(a), y_(y), cache_(a.cols(), 0.0), stamp_(a.cols(), 0) {}

    /// Invalidates the cache after y changed.
    void next_step() noexcept { ++epoch_; }

    double operator()(std::size_t j)
    {
        if (stamp_[j] == epoch_) return cache_[j];
        double s = 0.0;
        const auto sup = y_.support();
        const auto vals = y_.values();
        if (y_.basis() == DescriptionBasis::rows) {
            for (std::size_t k = 0; k < sup.size(); ++k) s += vals[k] * a_.entry(sup[k], j);
        } else {
            s = y_.coefficient(j);
        }
        cache_[j] = s;
        stamp_[j] = epoch_;
        return s;
    }

private:
    const MatrixSQ& a_;
    const SparseDescription& y_;
    std::vector<double> cache_;
    std::vector<std::uint64_t> stamp_;
    std::uint64_t epoch_ = 1;
};

double residual_norm(const MatrixSQ& a, std::span<const double> b, std::span<const double> x);

/// Collects trace records, flop counts and the optional early stop.
class TraceRecorder {
public:
    TraceRecorder(const MatrixSQ& a, std::span<const double> b, const SolverConfig& cfg);

    /// True when the solver must keep a dense copy of x_k.
    bool needs_iterate() const noexcept { return cfg_.track_trace || cfg_.stop_tolerance.has_value(); }
    bool wants_record(std::size_t step) const noexcept
    {
        return cfg_.track_trace && (step % cfg_.trace_stride == 0 || step == cfg_.T);
    }

    void count_flops(std::uint64_t flops) noexcept
    {
        last_flops_ = flops;
        trace_.total_flops += flops;
        if (flops > trace_.max_step_flops) trace_.max_step_flops = flops;
    }

    void record(std::size_t step, std::span<const double> x, std::size_t support_size,
                double lambda_norm_sq, double mu);

    /// Residual-based early stop, evaluated every ceil(T/20) steps.
    bool should_stop(std::size_t step, std::span<const double> x);

    IterationTrace finish(std::size_t iterations);

private:
    const MatrixSQ& a_;
    std::span<const double> b_;
    const SolverConfig& cfg_;
    IterationTrace trace_;
    std::uint64_t last_flops_ = 0;
    std::size_t check_every_ = 1;
    Rng residual_rng_;
};

void require_rhs(const MatrixSQ& a, std::span<const double> b);

} // namespace qis::detail
