#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qisolve/matrix.hpp"
#include "qisolve/rng.hpp"
#include "qisolve/solvers/types.hpp"

/// Dense, small-scale ground truth. Everything here is O(mn^2) or worse and
/// is meant for instances with n <= 2000.
namespace qis::oracle {

/// Relative threshold below which singular values count as zero.
inline constexpr double rank_threshold = 1e-10;

struct SpectralSummary {
    std::vector<double> singular_values;  ///< descending
    double spectral_norm = 0.0;           ///< ||A||
    double min_singular = 0.0;            ///< smallest nonzero singular value
    double frobenius = 0.0;               ///< ||A||_F
    double kappa = 0.0;                   ///< ||A|| ||A^-1||
    double kappa_f = 0.0;                 ///< ||A||_F ||A^-1||
    double trace = 0.0;                   ///< Tr(A); 0 for non-square input
    double inv_norm = 0.0;                ///< ||A^-1|| (Moore-Penrose)
    std::size_t rank = 0;
};

SpectralSummary spectral_summary(const DenseMatrix& a);

/// Minimum-norm minimiser of ||Ax - b|| via the SVD pseudoinverse.
std::vector<double> min_norm_least_squares(const DenseMatrix& a, std::span<const double> b);

/// Component of v orthogonal to the column space of A.
std::vector<double> orthogonal_to_range(const DenseMatrix& a, std::span<const double> v);

/// Smallest eigenvalue of a symmetric matrix.
double smallest_eigenvalue(const DenseMatrix& symmetric);

/// D_v(i) = v_i^2 / ||v||^2. Throws EmptyDistribution for v = 0.
std::vector<double> exact_distribution(std::span<const double> v);

/// counts / sum(counts)
std::vector<double> empirical_distribution(std::span<const std::uint64_t> counts);

/// 1/2 sum_i |p_i - q_i|
double tv_distance(std::span<const double> p, std::span<const double> q);

/// Upper-tail p-value of Pearson's statistic sum (c_i - e_i)^2 / e_i with
/// (#cells with e_i > 0) - 1 degrees of freedom. Cells with e_i = 0 must
/// have c_i = 0, otherwise the p-value is 0.
double chi_square_pvalue(std::span<const std::uint64_t> counts, std::span<const double> expected);

/// Least-squares slope of y on x.
double fit_slope(std::span<const double> x, std::span<const double> y);

struct MuStatistics {
    double mean = 0.0;
    double variance = 0.0;    ///< unbiased sample variance
    double bound = 0.0;       ///< ||A||_F^2 ||x||^2 / (d min_j ||A_{*j}||^2)
    std::size_t draws = 0;

    double standard_error() const;
};

/// Monte Carlo statistics of mu = <Ã_{r*}, x> - sampled estimate, over N
/// independent column samples D, with x = A^T y held fixed.
MuStatistics mu_statistics(const MatrixSQ& a, std::size_t r, const SparseDescription& y,
                           std::uint64_t d, std::size_t draws, Rng& rng);

} // namespace qis::oracle
