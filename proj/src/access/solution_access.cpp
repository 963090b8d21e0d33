#include "qisolve/access/solution_access.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "qisolve/errors.hpp"

namespace qis {

double query_solution_entry(const SparseDescription& desc, std::size_t j)
{
    if (!desc.has_matrix()) throw InvalidInput("description has no matrix");
    const std::size_t n = desc.solution_dimension();
    if (j >= n) throw IndexError(j, n);
    if (desc.basis() == DescriptionBasis::identity) return desc.coefficient(j);

    const MatrixSQ& a = desc.matrix();
    const auto sup = desc.support();
    const auto vals = desc.values();
    double s = 0.0;
    for (std::size_t p = 0; p < sup.size(); ++p) s += vals[p] * a.entry(sup[p], j);
    return s;
}

OversampledAccess OversampledAccess::build(const SparseDescription& desc, std::optional<double> phi_hat)
{
    if (!desc.has_matrix()) throw InvalidInput("description has no matrix");
    if (desc.empty()) throw InvalidInput("description has empty support");

    const auto sup = desc.support();
    const auto vals = desc.values();
    const bool rows = desc.basis() == DescriptionBasis::rows;
    std::vector<double> weights(sup.size());
    CompensatedSum total;
    for (std::size_t p = 0; p < sup.size(); ++p) {
        const double vn_sq = rows ? desc.matrix().row_norm_sq(sup[p]) : 1.0;
        weights[p] = std::abs(vals[p]) * std::sqrt(vn_sq);
        total.add(vals[p] * vals[p] * vn_sq);
    }
    if (!(total.value() > 0.0)) throw EmptyDistribution("every term of the description is zero");

    OversampledAccess oa;
    oa.desc_ = &desc;
    oa.k_ = sup.size();
    oa.combo_ = VectorSQ::sparse(desc.coefficient_dimension(), sup, weights);
    oa.tilde_norm_sq_ = static_cast<double>(oa.k_) * total.value();
    if (phi_hat) oa.set_phi_hat(*phi_hat);
    return oa;
}

void OversampledAccess::set_phi_hat(double phi_hat)
{
    if (!(phi_hat > 0.0) || !std::isfinite(phi_hat)) throw InvalidInput("phi_hat must be positive and finite");
    phi_hat_ = phi_hat;
}

std::size_t OversampledAccess::sample_tilde(Rng& rng) const
{
    const std::size_t i = combo_.sample(rng);
    if (desc_->basis() == DescriptionBasis::identity) return i;
    return desc_->matrix().row(i).sample(rng);
}

OversampledAccess::Entry OversampledAccess::entry(std::size_t j) const
{
    const std::size_t n = desc_->solution_dimension();
    if (j >= n) throw IndexError(j, n);
    if (desc_->basis() == DescriptionBasis::identity) {
        const double c = desc_->coefficient(j);
        return {c, static_cast<double>(k_) * c * c};
    }
    const MatrixSQ& a = desc_->matrix();
    const auto sup = desc_->support();
    const auto vals = desc_->values();
    double x = 0.0;
    double sq = 0.0;
    for (std::size_t p = 0; p < sup.size(); ++p) {
        const VectorSQ& row = a.row(sup[p]);
        const double t = vals[p] * (row.is_sparse() ? row.query(j) : row.values()[j]);
        x += t;
        sq += t * t;
    }
    return {x, static_cast<double>(k_) * sq};
}

double OversampledAccess::tilde_entry_sq(std::size_t j) const { return entry(j).tilde_sq; }

namespace {

double acceptance_ratio(const OversampledAccess& oa, std::size_t j)
{
    const auto e = oa.entry(j);
    if (!(e.tilde_sq > 0.0)) return 0.0;
    return std::min(1.0, e.x * e.x / e.tilde_sq);
}

void require_probability(double v, const char* name)
{
    if (!(v > 0.0 && v < 1.0)) throw InvalidInput(std::string(name) + " must lie in (0, 1)");
}

} // namespace

RejectionDraw rejection_sample(const OversampledAccess& oa, Rng& rng, double delta)
{
    require_probability(delta, "delta");
    if (!oa.phi_hat()) throw PreconditionError("rejection sampling needs phi_hat");
    const double cap_real = std::ceil(10.0 * *oa.phi_hat() * std::log(1.0 / delta));
    const std::uint64_t cap = cap_real < 1.0 ? 1 : static_cast<std::uint64_t>(cap_real);

    for (std::uint64_t attempt = 1; attempt <= cap; ++attempt) {
        const std::size_t j = oa.sample_tilde(rng);
        const auto e = oa.entry(j);
        if (rng.uniform() * e.tilde_sq < e.x * e.x) return {j, attempt};
    }
    throw SamplingFailure("no sample accepted after " + std::to_string(cap) +
                          " attempts; ||x|| may be near zero or phi_hat too small");
}

NormEstimate estimate_norm(const OversampledAccess& oa, double epsilon, double delta, Rng& rng)
{
    require_probability(epsilon, "epsilon");
    require_probability(delta, "delta");
    if (!oa.phi_hat()) throw PreconditionError("norm estimation needs phi_hat");

    const auto groups = static_cast<std::size_t>(std::ceil(6.0 * std::log(1.0 / delta)));
    const auto per_group = static_cast<std::uint64_t>(std::ceil(9.0 * *oa.phi_hat() / (epsilon * epsilon)));

    std::vector<double> means(groups);
    for (auto& m : means) {
        double s = 0.0;
        for (std::uint64_t t = 0; t < per_group; ++t) s += acceptance_ratio(oa, oa.sample_tilde(rng));
        m = s / static_cast<double>(per_group);
    }
    const auto mid = means.begin() + static_cast<std::ptrdiff_t>(groups / 2);
    std::nth_element(means.begin(), mid, means.end());
    double median = *mid;
    if (groups % 2 == 0) median = 0.5 * (median + *std::max_element(means.begin(), mid));

    NormEstimate out;
    out.value = std::sqrt(median * oa.tilde_norm_sq());
    out.degenerate = out.value <= 1e-8 * std::sqrt(oa.tilde_norm_sq());
    out.samples = groups * per_group;
    return out;
}

double measure_phi(const OversampledAccess& oa, double norm_of_x)
{
    if (!(norm_of_x > 0.0)) return std::numeric_limits<double>::infinity();
    return oa.tilde_norm_sq() / (norm_of_x * norm_of_x);
}

double bootstrap_phi_hat(OversampledAccess& oa, Rng& rng, std::uint64_t max_proposals)
{
    constexpr double target = 36.0;
    double s = 0.0;
    std::uint64_t n = 0;
    while (s < target) {
        if (n == max_proposals)
            throw SamplingFailure("phi bootstrap exhausted " + std::to_string(max_proposals) +
                                  " proposals; ||x|| may be near zero");
        s += acceptance_ratio(oa, oa.sample_tilde(rng));
        ++n;
    }
    const double phi = std::max(1.0, 2.0 * static_cast<double>(n) / s);
    oa.set_phi_hat(phi);
    return phi;
}

} // namespace qis
