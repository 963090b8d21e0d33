#include "qisolve/bench/generator.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "qisolve/errors.hpp"
#include "qisolve/rng.hpp"

namespace qis::bench {

namespace {

constexpr std::uint64_t matrix_stream = 0;
constexpr std::uint64_t planted_stream = 1;
constexpr std::uint64_t residual_stream = 2;

/// rows x cols matrix with orthonormal columns (rows >= cols).
Eigen::MatrixXd random_orthonormal(std::size_t rows, std::size_t cols, Rng& rng)
{
    Eigen::MatrixXd g(rows, cols);
    for (Eigen::Index j = 0; j < g.cols(); ++j)
        for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = rng.normal();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(g.rows(), g.cols());
    // Fix column signs so Q is Haar distributed.
    const Eigen::MatrixXd r = qr.matrixQR().topRows(g.cols()).triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < q.cols(); ++j)
        if (r(j, j) < 0.0) q.col(j) *= -1.0;
    return q;
}

Eigen::MatrixXd low_rank_product(std::size_t m, std::size_t n, const std::vector<double>& sigma, Rng& rng)
{
    const std::size_t r = sigma.size();
    const Eigen::MatrixXd u = random_orthonormal(m, r, rng);
    const Eigen::MatrixXd v = random_orthonormal(n, r, rng);
    const Eigen::VectorXd s = Eigen::Map<const Eigen::VectorXd>(sigma.data(), static_cast<Eigen::Index>(r));
    return u * s.asDiagonal() * v.transpose();
}

void shuffle(std::vector<std::size_t>& v, Rng& rng)
{
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.uniform_index(i)]);
}

std::vector<std::size_t> split_evenly(std::size_t total, std::size_t parts)
{
    std::vector<std::size_t> sizes(parts, total / parts);
    for (std::size_t i = 0; i < total % parts; ++i) ++sizes[i];
    return sizes;
}

DenseMatrix to_dense(const Eigen::MatrixXd& e)
{
    DenseMatrix a(static_cast<std::size_t>(e.rows()), static_cast<std::size_t>(e.cols()));
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j) a(i, j) = e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    return a;
}

/// Block-diagonal layout with column blocks of width <= s, each block given
/// its share of the prescribed singular values, then rows and columns
/// permuted. Every row has at most s nonzeros and the spectrum is exact.
DenseMatrix row_sparse(const GeneratorSpec& spec, std::vector<double> sigma, Rng& rng)
{
    const std::size_t m = spec.m;
    const std::size_t n = spec.n;
    const std::size_t s = spec.sparsity;
    const std::size_t blocks = (n + s - 1) / s;
    if (blocks > m)
        throw GenerationError("row sparsity " + std::to_string(s) + " needs at least " + std::to_string(blocks) +
                              " rows for " + std::to_string(n) + " columns; got " + std::to_string(m));

    const auto col_sizes = split_evenly(n, blocks);
    const auto row_sizes = split_evenly(m, blocks);

    std::vector<std::size_t> order(sigma.size());
    std::iota(order.begin(), order.end(), 0);
    shuffle(order, rng);

    DenseMatrix a(m, n);
    std::size_t r0 = 0, c0 = 0, next_sigma = 0;
    for (std::size_t b = 0; b < blocks; ++b) {
        const std::size_t mb = row_sizes[b];
        const std::size_t nb = col_sizes[b];
        std::vector<double> block_sigma(std::min(mb, nb));
        for (auto& v : block_sigma) v = sigma[order[next_sigma++]];
        const Eigen::MatrixXd blk = low_rank_product(mb, nb, block_sigma, rng);
        for (std::size_t i = 0; i < mb; ++i)
            for (std::size_t j = 0; j < nb; ++j)
                a(r0 + i, c0 + j) = blk(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        r0 += mb;
        c0 += nb;
    }

    std::vector<std::size_t> rp(m), cp(n);
    std::iota(rp.begin(), rp.end(), 0);
    std::iota(cp.begin(), cp.end(), 0);
    shuffle(rp, rng);
    shuffle(cp, rng);
    DenseMatrix out(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) out(rp[i], cp[j]) = a(i, j);
    return out;
}

DenseMatrix diagonally_dominant_spd(const GeneratorSpec& spec, Rng& rng)
{
    const std::size_t n = spec.n;
    double density = 1.0;
    if (spec.sparsity != 0 && n > 1)
        density = std::min(1.0, static_cast<double>(spec.sparsity - 1) / static_cast<double>(n - 1));
    DenseMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (rng.uniform() >= density) continue;
            const double v = 2.0 * rng.uniform() - 1.0;
            a(i, j) = v;
            a(j, i) = v;
        }
    for (std::size_t i = 0; i < n; ++i) {
        double off = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) off += std::abs(a(i, j));
        a(i, i) = off + 1.0;
    }
    return a;
}

DenseMatrix spectral_spd(const std::vector<double>& lambda, Rng& rng)
{
    const std::size_t n = lambda.size();
    const Eigen::MatrixXd q = random_orthonormal(n, n, rng);
    const Eigen::VectorXd l = Eigen::Map<const Eigen::VectorXd>(lambda.data(), static_cast<Eigen::Index>(n));
    Eigen::MatrixXd e = q * l.asDiagonal() * q.transpose();
    e = 0.5 * (e + e.transpose()).eval();
    return to_dense(e);
}

std::vector<double> random_unit(std::size_t n, Rng& rng)
{
    std::vector<double> v(n);
    for (auto& x : v) x = rng.normal();
    const double nv = norm2(v);
    for (auto& x : v) x /= nv;
    return v;
}

} // namespace

Profile parse_profile(const std::string& name)
{
    if (name == "geometric") return Profile::geometric;
    if (name == "linear") return Profile::linear;
    if (name == "flat") return Profile::flat;
    if (name == "explicit") return Profile::explicit_values;
    throw InvalidInput("unknown singular value profile '" + name + "'");
}

std::string to_string(Profile p)
{
    switch (p) {
    case Profile::geometric: return "geometric";
    case Profile::linear: return "linear";
    case Profile::flat: return "flat";
    case Profile::explicit_values: return "explicit";
    }
    return "unknown";
}

std::vector<double> singular_profile(const GeneratorSpec& spec, std::size_t r)
{
    if (r == 0) throw GenerationError("matrix must have at least one row and column");
    if (spec.profile == Profile::explicit_values) {
        std::vector<double> s = spec.singular_values;
        if (s.size() != r)
            throw GenerationError("expected " + std::to_string(r) + " singular values, got " + std::to_string(s.size()));
        for (double v : s)
            if (!(v > 0.0 && v <= 1.0)) throw GenerationError("singular values must lie in (0, 1]");
        std::sort(s.begin(), s.end(), std::greater<>());
        return s;
    }
    if (spec.profile == Profile::flat) return std::vector<double>(r, 1.0);
    if (!(spec.kappa >= 1.0) || !std::isfinite(spec.kappa)) throw GenerationError("kappa must be >= 1");

    std::vector<double> s(r, 1.0);
    if (r == 1) return s;
    const double last = static_cast<double>(r - 1);
    for (std::size_t i = 0; i < r; ++i) {
        const double t = static_cast<double>(i) / last;
        s[i] = spec.profile == Profile::geometric ? std::pow(spec.kappa, -t) : 1.0 - (1.0 - 1.0 / spec.kappa) * t;
    }
    s.back() = 1.0 / spec.kappa;
    return s;
}

DenseMatrix generate_matrix(const GeneratorSpec& spec)
{
    if (spec.m == 0 || spec.n == 0) throw GenerationError("matrix must have at least one row and column");
    Rng rng(derive_seed(spec.seed, matrix_stream));

    if (spec.spd) {
        if (spec.m != spec.n) throw GenerationError("SPD generation needs m = n");
        if (spec.diagonally_dominant) return diagonally_dominant_spd(spec, rng);
        if (spec.sparsity != 0 && spec.sparsity < spec.n)
            throw GenerationError("sparse SPD matrices are only generated in diagonally dominant mode");
        return spectral_spd(singular_profile(spec, spec.n), rng);
    }

    auto sigma = singular_profile(spec, std::min(spec.m, spec.n));
    if (spec.sparsity != 0 && spec.sparsity < spec.n) return row_sparse(spec, std::move(sigma), rng);
    return to_dense(low_rank_product(spec.m, spec.n, sigma, rng));
}

GeneratedProblem generate_problem(const GeneratorSpec& spec)
{
    GeneratedProblem p;
    p.a = generate_matrix(spec);
    p.spectrum = oracle::spectral_summary(p.a);

    Rng planted(derive_seed(spec.seed, planted_stream));
    p.x_planted = random_unit(spec.n, planted);
    p.b = multiply(p.a, p.x_planted);

    if (!spec.consistent) {
        if (!(spec.residual_norm >= 0.0)) throw GenerationError("residual norm must be non-negative");
        Rng res(derive_seed(spec.seed, residual_stream));
        std::vector<double> g(spec.m);
        for (auto& v : g) v = res.normal();
        auto z = oracle::orthogonal_to_range(p.a, g);
        const double nz = norm2(z);
        if (spec.residual_norm > 0.0) {
            if (nz <= 1e-8 * norm2(g))
                throw GenerationError("range(A) is all of R^m; no residual orthogonal to it exists (rank " +
                                      std::to_string(p.spectrum.rank) + ")");
            for (std::size_t i = 0; i < spec.m; ++i) p.b[i] += spec.residual_norm * z[i] / nz;
        }
    }

    p.x_star = oracle::min_norm_least_squares(p.a, p.b);
    const auto ax = multiply(p.a, p.x_star);
    std::vector<double> r(spec.m);
    for (std::size_t i = 0; i < spec.m; ++i) r[i] = ax[i] - p.b[i];
    p.residual_norm = norm2(r);
    return p;
}

} // namespace qis::bench
