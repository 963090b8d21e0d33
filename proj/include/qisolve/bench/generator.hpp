#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "qisolve/matrix.hpp"
#include "qisolve/oracle/oracle.hpp"

namespace qis::bench {

/// Shape of the prescribed singular values (or eigenvalues for SPD), all in
/// [1/kappa, 1] with the largest equal to 1.
enum class Profile {
    geometric,  ///< sigma_i = kappa^(-i/(r-1))
    linear,     ///< evenly spaced from 1 down to 1/kappa
    flat,       ///< all ones; kappa is ignored
    explicit_values,
};

Profile parse_profile(const std::string& name);
std::string to_string(Profile p);

struct GeneratorSpec {
    std::size_t m = 100;
    std::size_t n = 50;
    Profile profile = Profile::geometric;
    double kappa = 10.0;
    std::vector<double> singular_values;  ///< used with Profile::explicit_values

    /// Maximum nonzeros per row (expected count in diagonally dominant
    /// mode); 0 means dense.
    std::size_t sparsity = 0;

    bool spd = false;
    /// SPD only: strictly diagonally dominant matrix with random off-diagonal
    /// entries instead of a prescribed spectrum.
    bool diagonally_dominant = false;

    /// b = A x_planted when true; otherwise a residual of norm
    /// residual_norm orthogonal to range(A) is added.
    bool consistent = true;
    double residual_norm = 0.0;

    std::uint64_t seed = 0;
};

struct GeneratedProblem {
    DenseMatrix a;
    std::vector<double> b;
    std::vector<double> x_planted;
    std::vector<double> x_star;  ///< minimum-norm least-squares solution
    double residual_norm = 0.0;  ///< ||A x* - b||
    oracle::SpectralSummary spectrum;
};

/// The r values the profile prescribes, in descending order.
/// Throws GenerationError for kappa < 1 or explicit values outside (0, 1].
std::vector<double> singular_profile(const GeneratorSpec& spec, std::size_t r);

/// Throws GenerationError when the request cannot be realised.
GeneratedProblem generate_problem(const GeneratorSpec& spec);

/// A alone, without the right-hand side.
DenseMatrix generate_matrix(const GeneratorSpec& spec);

} // namespace qis::bench
