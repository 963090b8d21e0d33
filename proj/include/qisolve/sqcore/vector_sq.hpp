#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qisolve/matrix.hpp"
#include "qisolve/rng.hpp"

namespace qis {

/// Half-open slice [lo, hi) of the cumulative weight line owned by one index.
struct WeightInterval {
    double lo = 0.0;
    double hi = 0.0;

    double width() const noexcept { return hi - lo; }
};

/// Sampling-and-query access to a real vector v of dimension n.
///
/// Holds the entries together with a binary-indexed (Fenwick) prefix-sum tree
/// over the squared magnitudes |v_i|^2. This gives
///   - query(i)   : v_i, O(1) dense / O(log nnz) sparse
///   - norm()     : ||v||, O(1), accumulated with compensated summation
///   - sample(rng): index i with probability |v_i|^2 / ||v||^2, O(log n)
///   - update(i)  : single-entry change, O(log n)
///
/// A sparse instance stores only the listed entries; unlisted indices are
/// structural zeros and never sampled. The structure is immutable except via
/// update(), and const member functions are safe to call concurrently.
class VectorSQ {
public:
    VectorSQ() = default;

    /// Throws InvalidInput on an empty or non-finite input.
    static VectorSQ dense(std::span<const double> v);

    /// `indices` must be strictly increasing and below `dimension`.
    static VectorSQ sparse(std::size_t dimension, std::span<const std::size_t> indices,
                           std::span<const double> values);

    std::size_t dimension() const noexcept { return dimension_; }
    std::size_t stored() const noexcept { return values_.size(); }
    bool is_sparse() const noexcept { return sparse_; }

    /// Entry v_i exactly as stored. Throws IndexError if i >= dimension().
    double query(std::size_t i) const;

    double norm() const noexcept;
    double squared_norm() const noexcept { return total_.value(); }

    /// Draws i ~ D_v. Throws EmptyDistribution when ||v|| = 0.
    std::size_t sample(Rng& rng) const;

    /// Probability the sampler assigns to index i: interval width over tree total.
    double probability(std::size_t i) const;

    /// The slice of the tree's weight line that maps to index i.
    WeightInterval interval(std::size_t i) const;

    /// Sum of the weights of the first `count` stored entries, read from the tree.
    double prefix_weight(std::size_t count) const;

    /// Grand total as held by the tree (the sampler's normaliser).
    double tree_total() const noexcept { return tree_total_; }

    /// Smallest nonzero |v_i|^2, or 0 for the zero vector.
    double min_nonzero_weight() const noexcept;

    /// Sets v_i = value. For sparse vectors i must already be stored.
    void update(std::size_t i, double value);

    std::span<const double> values() const noexcept { return values_; }
    /// Stored positions of a sparse vector; empty for dense storage.
    std::span<const std::size_t> indices() const noexcept { return indices_; }

private:
    std::size_t position_of(std::size_t i) const;     // npos when not stored
    std::size_t index_at(std::size_t pos) const noexcept { return sparse_ ? indices_[pos] : pos; }
    void build_tree();

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    std::size_t dimension_ = 0;
    bool sparse_ = false;
    std::vector<double> values_;
    std::vector<std::size_t> indices_;
    std::vector<double> tree_;  // 1-based Fenwick array, size stored()+1
    double tree_total_ = 0.0;
    CompensatedSum total_;
};

} // namespace qis
