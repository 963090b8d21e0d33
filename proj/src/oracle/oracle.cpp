#include "qisolve/oracle/oracle.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <boost/math/distributions/chi_squared.hpp>

#include "qisolve/errors.hpp"
#include "qisolve/solvers/sampled.hpp"

namespace qis::oracle {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMajor> view(const DenseMatrix& a)
{
    if (a.values.size() != a.rows * a.cols) throw InvalidInput("dense matrix storage size mismatch");
    return {a.values.data(), static_cast<Eigen::Index>(a.rows), static_cast<Eigen::Index>(a.cols)};
}

Eigen::BDCSVD<Eigen::MatrixXd> thin_svd(const DenseMatrix& a)
{
    const Eigen::MatrixXd m = view(a);
    return Eigen::BDCSVD<Eigen::MatrixXd>(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
}

std::size_t numerical_rank(const Eigen::VectorXd& sv)
{
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    const double cut = rank_threshold * sv(0);
    std::size_t r = 0;
    while (r < static_cast<std::size_t>(sv.size()) && sv(static_cast<Eigen::Index>(r)) > cut) ++r;
    return r;
}

} // namespace

SpectralSummary spectral_summary(const DenseMatrix& a)
{
    const auto svd = thin_svd(a);
    const Eigen::VectorXd& sv = svd.singularValues();
    SpectralSummary s;
    s.singular_values.assign(sv.data(), sv.data() + sv.size());
    s.rank = numerical_rank(sv);
    s.spectral_norm = sv.size() > 0 ? sv(0) : 0.0;
    s.frobenius = std::sqrt(compensated_sum_of_squares(a.values));
    if (s.rank > 0) {
        s.min_singular = sv(static_cast<Eigen::Index>(s.rank - 1));
        s.inv_norm = 1.0 / s.min_singular;
        s.kappa = s.spectral_norm * s.inv_norm;
        s.kappa_f = s.frobenius * s.inv_norm;
    }
    if (a.rows == a.cols)
        for (std::size_t i = 0; i < a.rows; ++i) s.trace += a(i, i);
    return s;
}

std::vector<double> min_norm_least_squares(const DenseMatrix& a, std::span<const double> b)
{
    if (b.size() != a.rows) throw InvalidInput("right-hand side length does not match row count");
    const auto svd = thin_svd(a);
    const std::size_t rank = numerical_rank(svd.singularValues());
    const Eigen::Map<const Eigen::VectorXd> bv(b.data(), static_cast<Eigen::Index>(b.size()));
    Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(a.cols));
    for (std::size_t k = 0; k < rank; ++k) {
        const auto i = static_cast<Eigen::Index>(k);
        const double coef = svd.matrixU().col(i).dot(bv) / svd.singularValues()(i);
        x += coef * svd.matrixV().col(i);
    }
    return {x.data(), x.data() + x.size()};
}

std::vector<double> orthogonal_to_range(const DenseMatrix& a, std::span<const double> v)
{
    if (v.size() != a.rows) throw InvalidInput("vector length does not match row count");
    const auto svd = thin_svd(a);
    const std::size_t rank = numerical_rank(svd.singularValues());
    Eigen::VectorXd r = Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
    // Two passes of Gram-Schmidt against the range basis.
    for (int pass = 0; pass < 2; ++pass)
        for (std::size_t k = 0; k < rank; ++k) {
            const auto u = svd.matrixU().col(static_cast<Eigen::Index>(k));
            r -= u.dot(r) * u;
        }
    return {r.data(), r.data() + r.size()};
}

double smallest_eigenvalue(const DenseMatrix& symmetric)
{
    if (symmetric.rows != symmetric.cols) throw InvalidInput("eigenvalues need a square matrix");
    const Eigen::MatrixXd m = view(symmetric);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

std::vector<double> exact_distribution(std::span<const double> v)
{
    const double total = compensated_sum_of_squares(v);
    if (!(total > 0.0)) throw EmptyDistribution("distribution of a zero vector is undefined");
    std::vector<double> p(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) p[i] = v[i] * v[i] / total;
    return p;
}

std::vector<double> empirical_distribution(std::span<const std::uint64_t> counts)
{
    double total = 0.0;
    for (auto c : counts) total += static_cast<double>(c);
    if (!(total > 0.0)) throw EmptyDistribution("no observations");
    std::vector<double> p(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) p[i] = static_cast<double>(counts[i]) / total;
    return p;
}

double tv_distance(std::span<const double> p, std::span<const double> q)
{
    if (p.size() != q.size()) throw InvalidInput("distributions have different supports");
    CompensatedSum acc;
    for (std::size_t i = 0; i < p.size(); ++i) acc.add(std::abs(p[i] - q[i]));
    return 0.5 * acc.value();
}

double chi_square_pvalue(std::span<const std::uint64_t> counts, std::span<const double> expected)
{
    if (counts.size() != expected.size()) throw InvalidInput("counts and expectations differ in length");
    double stat = 0.0;
    std::size_t cells = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const double c = static_cast<double>(counts[i]);
        if (expected[i] <= 0.0) {
            if (c > 0.0) return 0.0;
            continue;
        }
        ++cells;
        stat += (c - expected[i]) * (c - expected[i]) / expected[i];
    }
    if (cells < 2) return 1.0;
    const boost::math::chi_squared dist(static_cast<double>(cells - 1));
    return boost::math::cdf(boost::math::complement(dist, stat));
}

double fit_slope(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || x.size() < 2) throw InvalidInput("slope fit needs >= 2 paired points");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0.0) throw InvalidInput("slope fit needs distinct abscissae");
    return sxy / sxx;
}

double MuStatistics::standard_error() const
{
    return draws > 0 ? std::sqrt(variance / static_cast<double>(draws)) : 0.0;
}

MuStatistics mu_statistics(const MatrixSQ& a, std::size_t r, const SparseDescription& y,
                           std::uint64_t d, std::size_t draws, Rng& rng)
{
    if (draws < 2) throw InvalidInput("mu statistics need at least two draws");
    const std::vector<double> x = y.materialize();
    const double exact = a.row_dot(r, x) / std::sqrt(a.row_norm_sq(r));

    // Welford accumulation.
    double mean = 0.0, m2 = 0.0;
    for (std::size_t t = 0; t < draws; ++t) {
        const double mu = exact - sampled_inner_product(a, r, y, d, rng);
        const double delta = mu - mean;
        mean += delta / static_cast<double>(t + 1);
        m2 += delta * (mu - mean);
    }
    MuStatistics s;
    s.draws = draws;
    s.mean = mean;
    s.variance = m2 / static_cast<double>(draws - 1);
    s.bound = a.frobenius_sq() * compensated_sum_of_squares(x) /
              (static_cast<double>(d) * a.min_column_norm_sq());
    return s;
}

} // namespace qis::oracle
