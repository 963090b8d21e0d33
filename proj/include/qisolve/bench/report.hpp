#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace qis::bench {

/// One solver run. Fields that do not apply (phi for primal solvers,
/// iterations_to_threshold when the threshold is never reached) are empty.
struct TrialRecord {
    std::string solver;
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    std::size_t m = 0;
    std::size_t n = 0;
    std::size_t s = 0;  ///< row sparsity of A
    double kappa = 0.0;
    double kappa_f = 0.0;
    double epsilon = 0.0;
    std::uint64_t d = 0;
    std::uint64_t T = 0;
    std::uint64_t q = 0;
    double final_error = 0.0;  ///< ||x_T - x*|| / ||x*||
    std::size_t iterations = 0;
    std::optional<std::size_t> iterations_to_threshold;
    double wall_time_s = 0.0;
    std::optional<double> phi;
    std::uint64_t max_step_flops = 0;
    std::size_t support_size = 0;
    std::string error;  ///< "kind: message" when the trial failed
};

enum class ReportFormat { csv, json };

ReportFormat parse_report_format(const std::string& name);
/// Format implied by a path's extension (.json, otherwise csv).
ReportFormat format_for_path(const std::string& path);

void write_report(std::ostream& out, const std::vector<TrialRecord>& records, ReportFormat format);
void save_report(const std::vector<TrialRecord>& records, const std::string& path, ReportFormat format);

} // namespace qis::bench
