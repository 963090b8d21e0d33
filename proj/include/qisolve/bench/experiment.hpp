#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qisolve/bench/generator.hpp"
#include "qisolve/bench/report.hpp"
#include "qisolve/bench/runner.hpp"

namespace qis::bench {

struct ExperimentSpec {
    GeneratorSpec generator;
    SolverKind solver = SolverKind::dual_sampled;
    /// epsilon, delta and seed (the master seed) are always used; d, T and q
    /// only when auto_schedule is false.
    SolverConfig config;
    bool auto_schedule = true;
    std::size_t trials = 1;
    std::size_t jobs = 1;
    /// When false wall_time_s is written as 0, making reports byte-identical
    /// across runs with the same spec.
    bool record_timing = true;
    /// Draw a fresh instance per trial (generator seed derived from the trial).
    bool vary_instance = false;
    /// Approximate number of points per error curve.
    std::size_t curve_points = 50;
    /// Grid for run_scaling_experiment.
    std::vector<double> kappa_grid;
    /// Report paths; the format follows the extension.
    std::vector<std::string> outputs;

    /// Throws InvalidInput on trials == 0, jobs == 0 or SPD with m != n.
    void validate() const;
};

/// Parses the JSON form:
///   {"generator": {"m", "n", "profile", "kappa", "singular_values", "sparsity",
///                  "spd", "diagonally_dominant", "consistent", "residual_norm", "seed"},
///    "solver": "averaged", "seed": 1, "epsilon": 0.1, "delta": 0.01,
///    "d", "T", "q", "auto_schedule", "trials", "jobs", "timing", "vary_instance",
///    "curve_points", "kappa_grid": [...], "outputs": [...]}
/// Every key is optional. Throws ParseError.
ExperimentSpec parse_experiment_spec(const std::string& json_text, const std::string& source = "<spec>");
ExperimentSpec load_experiment_spec(const std::string& path);

struct CurvePoint {
    std::size_t step = 0;
    double mean_sq_error = 0.0;    ///< mean of ||x_k - x*||^2 / ||x*||^2
    double median_sq_error = 0.0;
};

struct ConvergenceResult {
    std::vector<TrialRecord> records;
    std::vector<CurvePoint> curve;
    /// Mean over trials that reached ||x_k - x*|| <= epsilon ||x*||.
    std::optional<double> mean_iterations_to_threshold;
    std::optional<double> mean_phi;
};

ConvergenceResult run_convergence_experiment(const ExperimentSpec& spec);

struct ScalingPoint {
    double kappa = 0.0;  ///< measured by the oracle
    double kappa_f = 0.0;
    double mean_iterations_to_threshold = 0.0;
    double mean_phi = 0.0;
    std::size_t reached = 0;  ///< trials that reached the threshold
};

struct ScalingResult {
    std::vector<TrialRecord> records;
    std::vector<ScalingPoint> points;
    /// Slope of log(mean iterations to threshold) on log(kappa).
    double slope_kappa = 0.0;
};

/// One convergence experiment per entry of spec.kappa_grid.
ScalingResult run_scaling_experiment(const ExperimentSpec& spec);

/// Writes records to every path in spec.outputs.
void write_outputs(const ExperimentSpec& spec, const std::vector<TrialRecord>& records);

} // namespace qis::bench
