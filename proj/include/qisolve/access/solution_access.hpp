#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "qisolve/rng.hpp"
#include "qisolve/solvers/types.hpp"
#include "qisolve/sqcore/vector_sq.hpp"

namespace qis {

/// x_j for the solution described by `desc`; O(|supp(y)|) queries to A.
double query_solution_entry(const SparseDescription& desc, std::size_t j);

/// Oversampled SQ access to x = sum_i lambda_i v_i, where lambda = y and
/// v_i = A_{i*} (rows basis) or e_i (identity basis).
///
/// The dominating vector is v~_j^2 = k sum_i (lambda_i v_{i,j})^2 with
/// k = |supp(y)|, so v~_j^2 >= x_j^2 and ||v~||^2 = k sum_i ||lambda_i v_i||^2.
/// Sampling from v~ is two-stage: i with probability proportional to
/// ||lambda_i v_i||^2, then j from the distribution of v_i.
///
/// Immutable after build apart from set_phi_hat(); the description (and its
/// matrix) must outlive this object.
class OversampledAccess {
public:
    /// Throws InvalidInput for an empty support and EmptyDistribution when
    /// every lambda_i v_i is zero.
    static OversampledAccess build(const SparseDescription& desc,
                                   std::optional<double> phi_hat = std::nullopt);

    const SparseDescription& description() const noexcept { return *desc_; }
    std::size_t k() const noexcept { return k_; }
    const VectorSQ& combo_weights() const noexcept { return combo_; }
    double tilde_norm_sq() const noexcept { return tilde_norm_sq_; }

    /// Upper bound on phi used for attempt caps and sample counts.
    /// Unset until supplied to build(), set_phi_hat() or bootstrap_phi_hat().
    std::optional<double> phi_hat() const noexcept { return phi_hat_; }
    void set_phi_hat(double phi_hat);

    /// Index drawn from the v~ law.
    std::size_t sample_tilde(Rng& rng) const;

    /// v~_j^2
    double tilde_entry_sq(std::size_t j) const;

    struct Entry {
        double x = 0.0;         ///< x_j
        double tilde_sq = 0.0;  ///< v~_j^2
    };
    /// x_j and v~_j^2 in one pass over the support.
    Entry entry(std::size_t j) const;

private:
    const SparseDescription* desc_ = nullptr;
    std::size_t k_ = 0;
    VectorSQ combo_;
    double tilde_norm_sq_ = 0.0;
    std::optional<double> phi_hat_;
};

struct RejectionDraw {
    std::size_t index = 0;
    std::uint64_t attempts = 0;
};

/// Draws j ~ D_x by proposing from v~ and accepting with probability
/// x_j^2 / v~_j^2. Throws SamplingFailure after ceil(10 phi_hat ln(1/delta))
/// rejected proposals and PreconditionError when phi_hat is unset.
RejectionDraw rejection_sample(const OversampledAccess& oa, Rng& rng, double delta = 0.01);

struct NormEstimate {
    double value = 0.0;       ///< estimate of ||x||
    bool degenerate = false;  ///< estimate indistinguishable from zero
    std::uint64_t samples = 0;
};

/// Median-of-means estimate of ||x||: ceil(6 ln(1/delta)) groups, each the
/// mean of x_j^2 / v~_j^2 over ceil(9 phi_hat / epsilon^2) proposals.
/// `degenerate` is set when the estimate is below 1e-8 ||v~||, which happens
/// when the rows in the description cancel.
NormEstimate estimate_norm(const OversampledAccess& oa, double epsilon, double delta, Rng& rng);

/// k sum_i ||lambda_i v_i||^2 / norm_of_x^2
double measure_phi(const OversampledAccess& oa, double norm_of_x);

/// Coarse phi estimate from proposals alone: draws ratios x_j^2 / v~_j^2
/// until they sum to 36 (relative error about 1/2 on ||x||^2) and returns
/// twice the resulting phi estimate. Stores the value as phi_hat.
/// Throws SamplingFailure when `max_proposals` is exhausted first.
double bootstrap_phi_hat(OversampledAccess& oa, Rng& rng, std::uint64_t max_proposals = 50'000'000);

} // namespace qis
