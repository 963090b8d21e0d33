// qisolve command-line interface: gen, solve, sample, query, norm, bench.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qisolve/access/solution_access.hpp"
#include "qisolve/bench/experiment.hpp"
#include "qisolve/bench/generator.hpp"
#include "qisolve/bench/matrix_market.hpp"
#include "qisolve/bench/runner.hpp"
#include "qisolve/errors.hpp"
#include "qisolve/sqcore/matrix_sq.hpp"

using json = nlohmann::json;
namespace qb = qis::bench;

namespace {

constexpr const char* seed_env = "QISOLVE_SEED";

/// --seed if given, else the fallback (e.g. from a spec file), else
/// $QISOLVE_SEED, else 0.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag, std::optional<std::uint64_t> fallback = {})
{
    if (flag) return *flag;
    if (fallback) return *fallback;
    if (const char* env = std::getenv(seed_env)) {
        try {
            std::size_t pos = 0;
            const auto v = std::stoull(env, &pos);
            if (pos == std::string(env).size()) return v;
        } catch (const std::exception&) {
        }
        throw qis::InvalidInput(std::string(seed_env) + " is not an unsigned integer");
    }
    return 0;
}

void emit(const json& j) { std::cout << j.dump() << '\n'; }

struct LoadedMatrix {
    qis::CsrMatrix csr;
    qis::MatrixSQ msq;
};

std::unique_ptr<LoadedMatrix> load_matrix(const std::string& path)
{
    auto m = std::make_unique<LoadedMatrix>();
    m->csr = qb::load_matrix_market(path);
    m->msq = qis::MatrixSQ::build(m->csr);
    return m;
}

std::string basis_name(qis::DescriptionBasis b) { return b == qis::DescriptionBasis::rows ? "rows" : "identity"; }

qis::DescriptionBasis parse_basis(const std::string& s)
{
    if (s == "rows") return qis::DescriptionBasis::rows;
    if (s == "identity") return qis::DescriptionBasis::identity;
    throw qis::InvalidInput("unknown description basis '" + s + "'");
}

void save_description(const std::string& path, const std::string& matrix_path, const qis::SparseDescription& d)
{
    json j;
    j["matrix"] = matrix_path;
    j["basis"] = basis_name(d.basis());
    j["support"] = std::vector<std::size_t>(d.support().begin(), d.support().end());
    j["values"] = std::vector<double>(d.values().begin(), d.values().end());
    std::ofstream out(path);
    if (!out) throw qis::InvalidInput("cannot write '" + path + "'");
    out << j.dump() << '\n';
}

struct LoadedDescription {
    std::unique_ptr<LoadedMatrix> matrix;
    qis::SparseDescription desc;
};

LoadedDescription load_description(const std::string& path, const std::string& matrix_override)
{
    std::ifstream in(path);
    if (!in) throw qis::ParseError(path, 0, "cannot open file");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw qis::ParseError(path, 0, e.what());
    }
    LoadedDescription out;
    try {
        const std::string mpath = matrix_override.empty() ? j.at("matrix").get<std::string>() : matrix_override;
        out.matrix = load_matrix(mpath);
        out.desc = qis::SparseDescription(out.matrix->msq, j.at("support").get<std::vector<std::size_t>>(),
                                          j.at("values").get<std::vector<double>>(),
                                          parse_basis(j.value("basis", std::string("rows"))));
    } catch (const json::exception& e) {
        throw qis::ParseError(path, 0, e.what());
    }
    return out;
}

qis::OversampledAccess access_for(const qis::SparseDescription& d, std::optional<double> phi_hat, qis::Rng& rng)
{
    auto oa = qis::OversampledAccess::build(d, phi_hat);
    if (!phi_hat) qis::bootstrap_phi_hat(oa, rng);
    return oa;
}

int report_error(const std::string& kind, const std::string& message)
{
    std::cerr << json{{"error", kind}, {"message", message}}.dump() << '\n';
    return 2;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Randomized Kaczmarz solvers with sampling-and-query access"};
    app.require_subcommand(1);
    std::optional<std::uint64_t> seed;

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a test matrix and right-hand side");
    qb::GeneratorSpec gspec;
    std::string profile = "geometric", gen_out, gen_rhs, gen_solution;
    bool inconsistent = false;
    gen->add_option("--m", gspec.m, "Rows")->capture_default_str();
    gen->add_option("--n", gspec.n, "Columns")->capture_default_str();
    gen->add_option("--profile", profile, "geometric|linear|flat|explicit")->capture_default_str();
    gen->add_option("--kappa", gspec.kappa, "Condition number of the profile")->capture_default_str();
    gen->add_option("--singular-values", gspec.singular_values, "Values for the explicit profile");
    gen->add_option("--sparsity", gspec.sparsity, "Max nonzeros per row (0 = dense)")->capture_default_str();
    gen->add_flag("--spd", gspec.spd, "Symmetric positive definite");
    gen->add_flag("--diag-dominant", gspec.diagonally_dominant, "SPD via diagonal dominance");
    gen->add_flag("--inconsistent", inconsistent, "Add a residual orthogonal to range(A)");
    gen->add_option("--residual", gspec.residual_norm, "Norm of that residual")->capture_default_str();
    gen->add_option("--seed", seed, "Seed (default: $QISOLVE_SEED or 0)");
    gen->add_option("--out", gen_out, "Matrix Market output for A")->required();
    gen->add_option("--rhs", gen_rhs, "Output for b");
    gen->add_option("--solution", gen_solution, "Output for the least-squares solution x*");

    // solve
    auto* solve = app.add_subcommand("solve", "Run a solver");
    std::string matrix_path, rhs_path, solver_name = "dual-sampled", solve_out, x_out;
    qis::SolverConfig cfg;
    std::optional<std::uint64_t> d_flag, t_flag, q_flag;
    solve->add_option("--matrix", matrix_path, "Matrix Market file")->required();
    solve->add_option("--rhs", rhs_path, "Right-hand side")->required();
    solve->add_option("--solver", solver_name, "kaczmarz|dual-sampled|averaged|cd|cd-averaged")
        ->capture_default_str();
    solve->add_option("--eps", cfg.epsilon, "Target relative error")->capture_default_str();
    solve->add_option("--delta", cfg.delta, "Failure probability")->capture_default_str();
    solve->add_option("--seed", seed, "Seed (default: $QISOLVE_SEED or 0)");
    solve->add_option("--d", d_flag, "Override the inner-product sample count");
    solve->add_option("--T", t_flag, "Override the iteration count");
    solve->add_option("--q", q_flag, "Override the batch size");
    solve->add_option("--out", solve_out, "Description JSON output (dual solvers)");
    solve->add_option("--x-out", x_out, "Dense solution output");

    // sample / query / norm
    std::string desc_path, desc_matrix;
    std::optional<double> phi_hat;
    std::size_t count = 1;
    std::vector<std::size_t> indices;
    double delta = 0.01, eps = 0.1;

    auto* sample = app.add_subcommand("sample", "Draw indices j with probability x_j^2 / ||x||^2");
    sample->add_option("--description", desc_path, "Description JSON")->required();
    sample->add_option("--matrix", desc_matrix, "Override the matrix path in the description");
    sample->add_option("--count", count, "Number of samples")->capture_default_str();
    sample->add_option("--delta", delta, "Failure probability per sample")->capture_default_str();
    sample->add_option("--phi-hat", phi_hat, "Oversampling bound (default: bootstrap estimate)");
    sample->add_option("--seed", seed, "Seed (default: $QISOLVE_SEED or 0)");

    auto* query = app.add_subcommand("query", "Print entries x_j");
    query->add_option("--description", desc_path, "Description JSON")->required();
    query->add_option("--matrix", desc_matrix, "Override the matrix path in the description");
    query->add_option("--index", indices, "Entry index (repeatable)")->required();

    auto* norm = app.add_subcommand("norm", "Estimate ||x||");
    norm->add_option("--description", desc_path, "Description JSON")->required();
    norm->add_option("--matrix", desc_matrix, "Override the matrix path in the description");
    norm->add_option("--eps", eps, "Relative error")->capture_default_str();
    norm->add_option("--delta", delta, "Failure probability")->capture_default_str();
    norm->add_option("--phi-hat", phi_hat, "Oversampling bound (default: bootstrap estimate)");
    norm->add_option("--seed", seed, "Seed (default: $QISOLVE_SEED or 0)");

    // bench
    auto* bench = app.add_subcommand("bench", "Run an experiment from a JSON spec");
    std::string spec_path, bench_out, format;
    std::optional<std::size_t> trials, jobs;
    std::optional<std::string> bench_solver;
    bench->add_option("--spec", spec_path, "ExperimentSpec JSON")->required();
    bench->add_option("--solver", bench_solver, "Override the spec's solver");
    bench->add_option("--trials", trials, "Override the trial count");
    bench->add_option("--jobs", jobs, "Concurrent trials");
    bench->add_option("--seed", seed, "Master seed (default: spec, then $QISOLVE_SEED, then 0)");
    bench->add_option("--out", bench_out, "Report path");
    bench->add_option("--format", format, "csv|json (default: from the extension)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*gen) {
            gspec.profile = qb::parse_profile(profile);
            gspec.consistent = !inconsistent;
            gspec.seed = resolve_seed(seed);
            const auto p = qb::generate_problem(gspec);
            if (gspec.sparsity != 0 && gspec.sparsity < gspec.n)
                qb::save_matrix_market(gen_out, qis::CsrMatrix::from_dense(p.a));
            else
                qb::save_matrix_market(gen_out, p.a);
            if (!gen_rhs.empty()) qb::save_vector(gen_rhs, p.b);
            if (!gen_solution.empty()) qb::save_vector(gen_solution, p.x_star);
            emit({{"m", gspec.m}, {"n", gspec.n}, {"seed", gspec.seed}, {"kappa", p.spectrum.kappa},
                  {"kappa_f", p.spectrum.kappa_f}, {"frobenius", p.spectrum.frobenius},
                  {"rank", p.spectrum.rank}, {"residual_norm", p.residual_norm}, {"matrix", gen_out}});
        } else if (*solve) {
            const auto kind = qb::parse_solver(solver_name);
            const auto m = load_matrix(matrix_path);
            const auto b = qb::load_vector(rhs_path);
            cfg.seed = resolve_seed(seed);
            const auto spectrum = qis::oracle::spectral_summary(m->csr.to_dense());
            std::optional<qis::SpdOperator> spd;
            if (qb::needs_spd(kind)) spd = qis::SpdOperator::make(m->msq, qis::SpdCheck::full);
            cfg = qb::configure(kind, cfg, m->msq, spectrum, spd ? &*spd : nullptr);
            if (d_flag) cfg.d = *d_flag;
            if (t_flag) cfg.T = *t_flag;
            if (q_flag) cfg.q = *q_flag;
            const auto res = qb::run_solver(kind, m->msq, b, cfg, spd ? &*spd : nullptr);

            json out{{"solver", solver_name}, {"seed", cfg.seed}, {"epsilon", cfg.epsilon},
                     {"kappa", cfg.kappa},    {"kappa_f", cfg.kappa_f}, {"d", cfg.d},
                     {"T", cfg.T},            {"q", cfg.q},             {"iterations", res.trace.iterations}};
            if (res.description) {
                out["support_size"] = res.description->size();
                if (!solve_out.empty()) {
                    save_description(solve_out, matrix_path, *res.description);
                    out["description"] = solve_out;
                }
            } else if (!solve_out.empty()) {
                throw qis::InvalidInput("--out writes a description; use --x-out for " + solver_name);
            }
            if (!x_out.empty()) {
                qb::save_vector(x_out, res.x);
                out["x"] = x_out;
            }
            emit(out);
        } else if (*query) {
            const auto d = load_description(desc_path, desc_matrix);
            for (std::size_t j : indices) emit({{"index", j}, {"value", qis::query_solution_entry(d.desc, j)}});
        } else if (*sample) {
            const auto d = load_description(desc_path, desc_matrix);
            qis::Rng rng(resolve_seed(seed));
            const auto oa = access_for(d.desc, phi_hat, rng);
            for (std::size_t t = 0; t < count; ++t) {
                const auto draw = qis::rejection_sample(oa, rng, delta);
                emit({{"index", draw.index}, {"attempts", draw.attempts}});
            }
        } else if (*norm) {
            const auto d = load_description(desc_path, desc_matrix);
            qis::Rng rng(resolve_seed(seed));
            const auto oa = access_for(d.desc, phi_hat, rng);
            const auto est = qis::estimate_norm(oa, eps, delta, rng);
            emit({{"norm", est.value}, {"degenerate", est.degenerate}, {"phi_hat", *oa.phi_hat()},
                  {"samples", est.samples}, {"k", oa.k()}});
        } else if (*bench) {
            auto spec = qb::load_experiment_spec(spec_path);
            std::optional<std::uint64_t> spec_seed;
            {
                std::ifstream in(spec_path);
                const auto j = json::parse(in, nullptr, false);
                if (j.is_object() && j.contains("seed")) spec_seed = spec.config.seed;
            }
            spec.config.seed = resolve_seed(seed, spec_seed);
            if (bench_solver) spec.solver = qb::parse_solver(*bench_solver);
            if (trials) spec.trials = *trials;
            if (jobs) spec.jobs = *jobs;
            if (!bench_out.empty()) spec.outputs = {bench_out};
            const auto fmt = format.empty() ? std::optional<qb::ReportFormat>{} : qb::parse_report_format(format);

            std::vector<qb::TrialRecord> records;
            json summary{{"solver", qb::to_string(spec.solver)}, {"trials", spec.trials}, {"seed", spec.config.seed}};
            if (spec.kappa_grid.size() >= 2) {
                auto r = qb::run_scaling_experiment(spec);
                json pts = json::array();
                for (const auto& p : r.points)
                    pts.push_back({{"kappa", p.kappa}, {"kappa_f", p.kappa_f},
                                   {"mean_iterations_to_threshold", p.mean_iterations_to_threshold},
                                   {"mean_phi", p.mean_phi}, {"reached", p.reached}});
                summary["points"] = pts;
                summary["slope_kappa"] = r.slope_kappa;
                records = std::move(r.records);
            } else {
                auto r = qb::run_convergence_experiment(spec);
                std::size_t failed = 0;
                for (const auto& rec : r.records) failed += rec.error.empty() ? 0 : 1;
                summary["failed_trials"] = failed;
                if (r.mean_iterations_to_threshold) summary["mean_iterations_to_threshold"] = *r.mean_iterations_to_threshold;
                if (r.mean_phi) summary["mean_phi"] = *r.mean_phi;
                if (!r.curve.empty()) summary["final_mean_sq_error"] = r.curve.back().mean_sq_error;
                records = std::move(r.records);
            }
            for (const auto& path : spec.outputs)
                qb::save_report(records, path, fmt ? *fmt : qb::format_for_path(path));
            if (!spec.outputs.empty()) summary["outputs"] = spec.outputs;
            emit(summary);
        }
    } catch (const qis::Error& e) {
        return report_error(e.kind(), e.what());
    } catch (const std::exception& e) {
        return report_error("internal", e.what());
    }
    return 0;
}
