#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the library except for the plain data types.

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "qisolve/matrix.hpp"

namespace th {

inline std::vector<double> random_vector(std::size_t n, std::uint64_t seed)
{
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> nd;
    std::vector<double> v(n);
    for (auto& x : v) x = nd(gen);
    return v;
}

inline qis::DenseMatrix random_dense(std::size_t m, std::size_t n, std::uint64_t seed)
{
    qis::DenseMatrix a(m, n);
    a.values = random_vector(m * n, seed);
    return a;
}

inline std::vector<double> matvec(const qis::DenseMatrix& a, std::span<const double> x)
{
    std::vector<double> y(a.rows);
    for (std::size_t i = 0; i < a.rows; ++i) {
        long double s = 0;
        for (std::size_t j = 0; j < a.cols; ++j) s += static_cast<long double>(a(i, j)) * x[j];
        y[i] = static_cast<double>(s);
    }
    return y;
}

inline std::vector<double> matvec_t(const qis::DenseMatrix& a, std::span<const double> y)
{
    std::vector<double> x(a.cols);
    for (std::size_t j = 0; j < a.cols; ++j) {
        long double s = 0;
        for (std::size_t i = 0; i < a.rows; ++i) s += static_cast<long double>(a(i, j)) * y[i];
        x[j] = static_cast<double>(s);
    }
    return x;
}

inline double sum_sq(std::span<const double> v)
{
    long double s = 0;
    for (double x : v) s += static_cast<long double>(x) * x;
    return static_cast<double>(s);
}

inline double norm(std::span<const double> v) { return std::sqrt(sum_sq(v)); }

inline double dist(std::span<const double> a, std::span<const double> b)
{
    long double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const long double d = static_cast<long double>(a[i]) - b[i];
        s += d * d;
    }
    return static_cast<double>(std::sqrt(s));
}

/// |v_i|^2 / ||v||^2
inline std::vector<double> squared_law(std::span<const double> v)
{
    const double t = sum_sq(v);
    std::vector<double> p(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) p[i] = v[i] * v[i] / t;
    return p;
}

inline std::vector<double> frequencies(std::span<const std::uint64_t> counts)
{
    double total = 0;
    for (auto c : counts) total += static_cast<double>(c);
    std::vector<double> f(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) f[i] = static_cast<double>(counts[i]) / total;
    return f;
}

inline double tv(std::span<const double> p, std::span<const double> q)
{
    double s = 0;
    for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
    return 0.5 * s;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b)
{
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

} // namespace th
