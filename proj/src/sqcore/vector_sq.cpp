#include "qisolve/sqcore/vector_sq.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "qisolve/errors.hpp"

namespace qis {

namespace {

void require_finite(std::span<const double> v)
{
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!std::isfinite(v[i]))
            throw InvalidInput("non-finite entry at index " + std::to_string(i));
}

std::size_t lowbit(std::size_t i) noexcept { return i & (~i + 1); }

} // namespace

VectorSQ VectorSQ::dense(std::span<const double> v)
{
    if (v.empty()) throw InvalidInput("VectorSQ requires at least one entry");
    require_finite(v);
    VectorSQ sq;
    sq.dimension_ = v.size();
    sq.values_.assign(v.begin(), v.end());
    sq.build_tree();
    return sq;
}

VectorSQ VectorSQ::sparse(std::size_t dimension, std::span<const std::size_t> indices,
                          std::span<const double> values)
{
    if (dimension == 0) throw InvalidInput("VectorSQ requires dimension >= 1");
    if (indices.size() != values.size())
        throw InvalidInput("sparse VectorSQ: index/value length mismatch");
    require_finite(values);
    for (std::size_t k = 0; k < indices.size(); ++k) {
        if (indices[k] >= dimension) throw IndexError(indices[k], dimension);
        if (k > 0 && indices[k] <= indices[k - 1])
            throw InvalidInput("sparse VectorSQ: indices must be strictly increasing");
    }
    VectorSQ sq;
    sq.dimension_ = dimension;
    sq.sparse_ = true;
    sq.indices_.assign(indices.begin(), indices.end());
    sq.values_.assign(values.begin(), values.end());
    sq.build_tree();
    return sq;
}

void VectorSQ::build_tree()
{
    const std::size_t n = values_.size();
    tree_.assign(n + 1, 0.0);
    total_ = CompensatedSum{};
    for (std::size_t k = 0; k < n; ++k) {
        const double w = values_[k] * values_[k];
        tree_[k + 1] = w;
        total_.add(w);
    }
    for (std::size_t i = 1; i <= n; ++i) {
        const std::size_t parent = i + lowbit(i);
        if (parent <= n) tree_[parent] += tree_[i];
    }
    tree_total_ = prefix_weight(n);
}

std::size_t VectorSQ::position_of(std::size_t i) const
{
    if (i >= dimension_) throw IndexError(i, dimension_);
    if (!sparse_) return i;
    const auto it = std::lower_bound(indices_.begin(), indices_.end(), i);
    if (it == indices_.end() || *it != i) return npos;
    return static_cast<std::size_t>(it - indices_.begin());
}

double VectorSQ::query(std::size_t i) const
{
    const std::size_t pos = position_of(i);
    return pos == npos ? 0.0 : values_[pos];
}

double VectorSQ::norm() const noexcept
{
    return std::sqrt(std::max(0.0, squared_norm()));
}

double VectorSQ::prefix_weight(std::size_t count) const
{
    if (count > stored()) throw IndexError(count, stored() + 1);
    double s = 0.0;
    for (std::size_t i = count; i > 0; i -= lowbit(i)) s += tree_[i];
    return s;
}

WeightInterval VectorSQ::interval(std::size_t i) const
{
    const std::size_t pos = position_of(i);
    if (pos == npos) {
        // Structural zero: an empty interval at the insertion point.
        const auto at = static_cast<std::size_t>(
            std::lower_bound(indices_.begin(), indices_.end(), i) - indices_.begin());
        const double p = prefix_weight(at);
        return {p, p};
    }
    return {prefix_weight(pos), prefix_weight(pos + 1)};
}

double VectorSQ::probability(std::size_t i) const
{
    const double total = tree_total();
    if (total <= 0.0) throw EmptyDistribution("probability of a zero vector is undefined");
    return interval(i).width() / total;
}

double VectorSQ::min_nonzero_weight() const noexcept
{
    double best = 0.0;
    for (double v : values_) {
        const double w = v * v;
        if (w > 0.0 && (best == 0.0 || w < best)) best = w;
    }
    return best;
}

std::size_t VectorSQ::sample(Rng& rng) const
{
    const std::size_t n = stored();
    const double total = tree_total();
    if (!(total > 0.0)) throw EmptyDistribution("cannot sample from a zero vector");

    double u = rng.uniform() * total;
    std::size_t pos = 0;
    for (std::size_t step = std::bit_floor(n); step > 0; step >>= 1) {
        const std::size_t next = pos + step;
        if (next <= n && tree_[next] <= u) {
            pos = next;
            u -= tree_[next];
        }
    }
    // Rounding can land past the end or on a zero-weight slot; snap to the
    // nearest entry with positive weight.
    if (pos >= n) pos = n - 1;
    if (values_[pos] == 0.0) {
        std::size_t fwd = pos;
        while (fwd < n && values_[fwd] == 0.0) ++fwd;
        if (fwd < n) {
            pos = fwd;
        } else {
            while (values_[pos] == 0.0) --pos;
        }
    }
    return index_at(pos);
}

void VectorSQ::update(std::size_t i, double value)
{
    if (!std::isfinite(value)) throw InvalidInput("non-finite update value");
    const std::size_t pos = position_of(i);
    if (pos == npos) throw InvalidInput("update of an unstored entry in a sparse VectorSQ");
    const double old_w = values_[pos] * values_[pos];
    const double new_w = value * value;
    values_[pos] = value;
    const double delta = new_w - old_w;
    for (std::size_t k = pos + 1; k <= stored(); k += lowbit(k)) tree_[k] += delta;
    tree_total_ = prefix_weight(stored());
    total_.add(delta);
}

} // namespace qis
