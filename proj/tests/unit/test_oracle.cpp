#include <doctest.h>

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "qisolve/errors.hpp"
#include "qisolve/oracle/oracle.hpp"

namespace oracle = qis::oracle;
using qis::DenseMatrix;

TEST_SUITE("least squares")
{
    TEST_CASE("identity returns b")
    {
        const auto b = th::random_vector(4, 1);
        const auto x = oracle::min_norm_least_squares(DenseMatrix::identity(4), b);
        CHECK(th::max_abs_diff(x, b) <= 1e-14);
    }

    TEST_CASE("rank-deficient projection")
    {
        DenseMatrix a(2, 2);
        a(0, 0) = 1;
        const std::vector<double> b{1, 1};
        const auto x = oracle::min_norm_least_squares(a, b);
        CHECK(x[0] == doctest::Approx(1.0));
        CHECK(std::abs(x[1]) <= 1e-15);
        const auto r = th::matvec(a, x);
        CHECK(th::dist(r, b) == doctest::Approx(1.0));
    }

    TEST_CASE("normal equations hold on a random 20x10")
    {
        const auto a = th::random_dense(20, 10, 3);
        const auto b = th::random_vector(20, 4);
        const auto x = oracle::min_norm_least_squares(a, b);
        auto r = th::matvec(a, x);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
        const auto g = th::matvec_t(a, r);
        const auto s = oracle::spectral_summary(a);
        CHECK(th::norm(g) <= 1e-8 * s.spectral_norm * th::norm(b));
    }

    TEST_CASE("A x* is the projection of b onto the range")
    {
        const auto a = th::random_dense(15, 6, 5);
        const auto b = th::random_vector(15, 6);
        const auto x = oracle::min_norm_least_squares(a, b);
        const auto ax = th::matvec(a, x);
        const auto perp = oracle::orthogonal_to_range(a, b);
        std::vector<double> sum(15);
        for (std::size_t i = 0; i < 15; ++i) sum[i] = ax[i] + perp[i];
        CHECK(th::max_abs_diff(sum, b) <= 1e-8 * th::norm(b));
        CHECK(th::norm(th::matvec_t(a, perp)) <= 1e-8 * th::norm(b));
    }

    TEST_CASE("minimum norm on a wide system")
    {
        const auto a = th::random_dense(4, 9, 7);
        const auto b = th::random_vector(4, 8);
        const auto x = oracle::min_norm_least_squares(a, b);
        CHECK(th::dist(th::matvec(a, x), b) <= 1e-10);
        const auto perp = oracle::orthogonal_to_range(a, b);
        CHECK(th::norm(perp) <= 1e-10);
        // x* lies in the row space, i.e. in range(A^T).
        DenseMatrix at(9, 4);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 9; ++j) at(j, i) = a(i, j);
        CHECK(th::norm(oracle::orthogonal_to_range(at, x)) <= 1e-10 * th::norm(x));
    }
}

TEST_SUITE("spectral summary")
{
    TEST_CASE("diag(1, 1/2)")
    {
        DenseMatrix a(2, 2);
        a(0, 0) = 1;
        a(1, 1) = 0.5;
        const auto s = oracle::spectral_summary(a);
        CHECK(s.spectral_norm == doctest::Approx(1.0));
        CHECK(s.inv_norm == doctest::Approx(2.0));
        CHECK(s.kappa == doctest::Approx(2.0));
        CHECK(s.kappa_f == doctest::Approx(std::sqrt(5.0)));
        CHECK(s.trace == doctest::Approx(1.5));
        CHECK(s.rank == 2);
    }

    TEST_CASE("identity")
    {
        const auto s = oracle::spectral_summary(DenseMatrix::identity(7));
        CHECK(s.kappa == doctest::Approx(1.0));
        CHECK(s.kappa_f == doctest::Approx(std::sqrt(7.0)));
    }

    TEST_CASE("zero singular values are dropped from the inverse")
    {
        DenseMatrix a(3, 3);
        a(0, 0) = 4;
        a(1, 1) = 2;
        a(2, 2) = 1e-14;
        const auto s = oracle::spectral_summary(a);
        CHECK(s.rank == 2);
        CHECK(s.inv_norm == doctest::Approx(0.5));
        CHECK(s.kappa == doctest::Approx(2.0));
    }

    TEST_CASE("invariants on random input")
    {
        const auto a = th::random_dense(30, 12, 9);
        const auto s = oracle::spectral_summary(a);
        double ss = 0;
        for (double v : s.singular_values) ss += v * v;
        CHECK(std::abs(ss - th::sum_sq(a.values)) <= 1e-8 * ss);
        CHECK(s.kappa == doctest::Approx(s.spectral_norm * s.inv_norm));
        CHECK(s.kappa_f == doctest::Approx(s.frobenius * s.inv_norm));
        CHECK(s.kappa <= s.kappa_f);
        CHECK(std::is_sorted(s.singular_values.rbegin(), s.singular_values.rend()));
    }

    TEST_CASE("smallest eigenvalue")
    {
        DenseMatrix a(2, 2);
        a.values = {2, 1, 1, 2};
        CHECK(oracle::smallest_eigenvalue(a) == doctest::Approx(1.0));
        a.values = {1, 2, 2, 1};
        CHECK(oracle::smallest_eigenvalue(a) == doctest::Approx(-1.0));
    }
}

TEST_SUITE("statistics")
{
    TEST_CASE("exact distribution")
    {
        const std::vector<double> v{3, 4};
        const auto p = oracle::exact_distribution(v);
        CHECK(p[0] == doctest::Approx(0.36));
        CHECK(p[1] == doctest::Approx(0.64));
        const std::vector<double> e{0, 0, 2};
        CHECK(oracle::exact_distribution(e) == std::vector<double>{0, 0, 1});
        const auto r = oracle::exact_distribution(th::random_vector(100, 2));
        double s = 0;
        for (double x : r) s += x;
        CHECK(std::abs(s - 1.0) <= 1e-12);
        CHECK_THROWS_AS(oracle::exact_distribution(std::vector<double>(3, 0.0)), qis::EmptyDistribution);
    }

    TEST_CASE("total variation")
    {
        const std::vector<double> p{0.5, 0.5}, q{0.6, 0.4};
        CHECK(oracle::tv_distance(p, p) == 0.0);
        CHECK(oracle::tv_distance(p, q) == doctest::Approx(0.1));
        const std::vector<double> a{1, 0}, b{0, 1};
        CHECK(oracle::tv_distance(a, b) == 1.0);
    }

    TEST_CASE("chi-square p-values")
    {
        const std::vector<std::uint64_t> even{250, 250, 250, 250};
        const std::vector<double> expected(4, 250.0);
        CHECK(oracle::chi_square_pvalue(even, expected) == doctest::Approx(1.0));
        // Statistic 7.2 on 3 degrees of freedom: upper tail 0.0657891 (scipy chi2.sf).
        const std::vector<std::uint64_t> off{280, 220, 250, 250};
        CHECK(oracle::chi_square_pvalue(off, expected) == doctest::Approx(0.0657890527).epsilon(1e-8));
        const std::vector<std::uint64_t> bad{500, 0, 0, 500};
        CHECK(oracle::chi_square_pvalue(bad, expected) < 1e-100);
    }

    TEST_CASE("tv and chi-square agree on calibrated fixtures")
    {
        const std::vector<double> expected{2500, 2500, 2500, 2500};
        const std::vector<double> law{0.25, 0.25, 0.25, 0.25};
        const std::vector<std::uint64_t> close{2510, 2490, 2530, 2470};
        const std::vector<std::uint64_t> far{3000, 2000, 2500, 2500};
        CHECK(oracle::chi_square_pvalue(close, expected) > 0.001);
        CHECK(oracle::tv_distance(oracle::empirical_distribution(close), law) <= 0.02);
        CHECK(oracle::chi_square_pvalue(far, expected) < 0.001);
        CHECK(oracle::tv_distance(oracle::empirical_distribution(far), law) > 0.02);
    }

    TEST_CASE("slope fit")
    {
        const std::vector<double> x{1, 2, 3, 4}, y{3, 5, 7, 9};
        CHECK(oracle::fit_slope(x, y) == doctest::Approx(2.0));
    }
}

TEST_SUITE("mu statistics")
{
    TEST_CASE("zero solution")
    {
        const auto a = qis::MatrixSQ::build(th::random_dense(4, 4, 1));
        qis::Rng rng(0);
        const auto s = oracle::mu_statistics(a, 1, qis::SparseDescription(a), 10, 100, rng);
        CHECK(s.mean == 0.0);
        CHECK(s.variance == 0.0);
    }

    TEST_CASE("one column makes the estimator exact")
    {
        const auto a = qis::MatrixSQ::build(th::random_dense(4, 1, 2));
        const qis::SparseDescription y(a, {0, 3}, {1.0, -0.5});
        qis::Rng rng(0);
        const auto s = oracle::mu_statistics(a, 2, y, 5, 1000, rng);
        CHECK(std::abs(s.mean) <= 1e-14);
        CHECK(s.variance <= 1e-28);
    }

    TEST_CASE("seed-0 5x5 instance within the bound")
    {
        const auto d = th::random_dense(5, 5, 0);
        const auto a = qis::MatrixSQ::build(d);
        const qis::SparseDescription y(a, {0, 2, 4}, {1.0, 0.5, -0.8});
        qis::Rng rng(0);
        const auto s = oracle::mu_statistics(a, 1, y, 20, 100000, rng);
        CHECK(std::abs(s.mean) <= 4 * s.standard_error());
        CHECK(s.variance <= 1.1 * s.bound);
        // The bound uses ||A||_F^2 ||x||^2 / (d min_j ||A_{*j}||^2).
        const auto x = th::matvec_t(d, y.dense_coefficients());
        double mincol = INFINITY;
        for (std::size_t j = 0; j < 5; ++j) {
            double c = 0;
            for (std::size_t i = 0; i < 5; ++i) c += d(i, j) * d(i, j);
            mincol = std::min(mincol, c);
        }
        CHECK(s.bound == doctest::Approx(th::sum_sq(d.values) * th::sum_sq(x) / (20 * mincol)));
    }
}
