#include "qisolve/bench/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

#include "qisolve/access/solution_access.hpp"
#include "qisolve/errors.hpp"

namespace qis::bench {

namespace {

struct Instance {
    GeneratedProblem problem;
    MatrixSQ msq;
    std::optional<SpdOperator> spd;
};

std::unique_ptr<Instance> make_instance(const GeneratorSpec& g, bool spd)
{
    auto inst = std::make_unique<Instance>();
    inst->problem = generate_problem(g);
    const Storage storage = g.sparsity != 0 && g.sparsity < g.n ? Storage::sparse : Storage::dense;
    inst->msq = MatrixSQ::build(inst->problem.a, storage);
    if (spd) inst->spd = SpdOperator::make(inst->msq, SpdCheck::full);
    return inst;
}

struct TrialOutput {
    TrialRecord record;
    std::vector<TraceRecord> trace;
    double x_star_norm = 0.0;
};

TrialOutput run_trial(const ExperimentSpec& spec, const Instance& inst, std::size_t t)
{
    TrialOutput out;
    TrialRecord& rec = out.record;
    rec.solver = to_string(spec.solver);
    rec.trial = t;
    rec.seed = derive_seed(spec.config.seed, t);
    rec.m = inst.msq.rows();
    rec.n = inst.msq.cols();
    rec.s = inst.msq.row_sparsity();
    rec.kappa = inst.problem.spectrum.kappa;
    rec.kappa_f = inst.problem.spectrum.kappa_f;
    rec.epsilon = spec.config.epsilon;
    rec.final_error = std::numeric_limits<double>::quiet_NaN();
    out.x_star_norm = norm2(inst.problem.x_star);

    try {
        SolverConfig cfg = configure(spec.solver, spec.config, inst.msq, inst.problem.spectrum,
                                     inst.spd ? &*inst.spd : nullptr, spec.auto_schedule);
        cfg.seed = rec.seed;
        cfg.track_trace = true;
        cfg.trace_stride = std::max<std::size_t>(1, cfg.T / std::max<std::size_t>(1, spec.curve_points));
        cfg.reference_solution = inst.problem.x_star;
        cfg.optimal_residual = inst.problem.residual_norm;
        rec.d = cfg.d;
        rec.T = cfg.T;
        rec.q = cfg.q;

        const auto start = std::chrono::steady_clock::now();
        SolveOutcome res = run_solver(spec.solver, inst.msq, inst.problem.b, cfg, inst.spd ? &*inst.spd : nullptr);
        const auto stop = std::chrono::steady_clock::now();
        if (spec.record_timing) rec.wall_time_s = std::chrono::duration<double>(stop - start).count();

        std::vector<double> diff(res.x.size());
        for (std::size_t j = 0; j < diff.size(); ++j) diff[j] = res.x[j] - inst.problem.x_star[j];
        rec.final_error = norm2(diff) / out.x_star_norm;
        rec.iterations = res.trace.iterations;
        rec.max_step_flops = res.trace.max_step_flops;
        for (const auto& r : res.trace.records) {
            if (r.error_norm <= spec.config.epsilon * out.x_star_norm) {
                rec.iterations_to_threshold = r.step;
                break;
            }
        }
        if (res.description) {
            rec.support_size = res.description->size();
            const double nx = norm2(res.x);
            if (!res.description->empty() && nx > 0.0)
                rec.phi = measure_phi(OversampledAccess::build(*res.description), nx);
        } else {
            rec.support_size = static_cast<std::size_t>(
                std::count_if(res.x.begin(), res.x.end(), [](double v) { return v != 0.0; }));
        }
        out.trace = std::move(res.trace.records);
    } catch (const Error& e) {
        rec.error = e.kind() + ": " + e.what();
    }
    return out;
}

/// Runs body(t) for t in [0, count) on up to `jobs` threads.
template <class Body>
void parallel_for(std::size_t count, std::size_t jobs, Body&& body)
{
    jobs = std::min(jobs, count);
    if (jobs <= 1) {
        for (std::size_t t = 0; t < count; ++t) body(t);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (std::size_t w = 0; w < jobs; ++w) {
        pool.emplace_back([&] {
            for (std::size_t t; (t = next.fetch_add(1)) < count;) {
                try {
                    body(t);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

double median_of(std::vector<double> v)
{
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    if (v.size() % 2 == 1) return *mid;
    return 0.5 * (*mid + *std::max_element(v.begin(), mid));
}

template <class T>
T get_or(const nlohmann::json& j, const char* key, T fallback)
{
    const auto it = j.find(key);
    return it == j.end() || it->is_null() ? fallback : it->get<T>();
}

} // namespace

void ExperimentSpec::validate() const
{
    if (trials == 0) throw InvalidInput("trials must be >= 1");
    if (jobs == 0) throw InvalidInput("jobs must be >= 1");
    if (generator.spd && generator.m != generator.n) throw InvalidInput("SPD experiments need m = n");
    if (needs_spd(solver) && !generator.spd) throw InvalidInput("solver " + to_string(solver) + " needs an SPD instance");
    config.validate();
}

ExperimentSpec parse_experiment_spec(const std::string& json_text, const std::string& source)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(source, 0, e.what());
    }
    ExperimentSpec s;
    try {
        if (!j.is_object()) throw ParseError(source, 0, "experiment spec must be a JSON object");
        if (const auto g = j.find("generator"); g != j.end()) {
            GeneratorSpec& gs = s.generator;
            gs.m = get_or<std::size_t>(*g, "m", gs.m);
            gs.n = get_or<std::size_t>(*g, "n", gs.n);
            gs.profile = parse_profile(get_or<std::string>(*g, "profile", to_string(gs.profile)));
            gs.kappa = get_or<double>(*g, "kappa", gs.kappa);
            gs.singular_values = get_or<std::vector<double>>(*g, "singular_values", {});
            gs.sparsity = get_or<std::size_t>(*g, "sparsity", gs.sparsity);
            gs.spd = get_or<bool>(*g, "spd", gs.spd);
            gs.diagonally_dominant = get_or<bool>(*g, "diagonally_dominant", gs.diagonally_dominant);
            gs.consistent = get_or<bool>(*g, "consistent", gs.consistent);
            gs.residual_norm = get_or<double>(*g, "residual_norm", gs.residual_norm);
            gs.seed = get_or<std::uint64_t>(*g, "seed", gs.seed);
        }
        s.solver = parse_solver(get_or<std::string>(j, "solver", to_string(s.solver)));
        s.config.seed = get_or<std::uint64_t>(j, "seed", s.config.seed);
        s.config.epsilon = get_or<double>(j, "epsilon", s.config.epsilon);
        s.config.delta = get_or<double>(j, "delta", s.config.delta);
        s.config.d = get_or<std::uint64_t>(j, "d", s.config.d);
        s.config.T = get_or<std::uint64_t>(j, "T", s.config.T);
        s.config.q = get_or<std::uint64_t>(j, "q", s.config.q);
        s.auto_schedule = get_or<bool>(j, "auto_schedule", !j.contains("T"));
        s.trials = get_or<std::size_t>(j, "trials", s.trials);
        s.jobs = get_or<std::size_t>(j, "jobs", s.jobs);
        s.record_timing = get_or<bool>(j, "timing", s.record_timing);
        s.vary_instance = get_or<bool>(j, "vary_instance", s.vary_instance);
        s.curve_points = get_or<std::size_t>(j, "curve_points", s.curve_points);
        s.kappa_grid = get_or<std::vector<double>>(j, "kappa_grid", {});
        s.outputs = get_or<std::vector<std::string>>(j, "outputs", {});
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(source, 0, e.what());
    }
    return s;
}

ExperimentSpec load_experiment_spec(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ParseError(path, 0, "cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_experiment_spec(ss.str(), path);
}

ConvergenceResult run_convergence_experiment(const ExperimentSpec& spec)
{
    spec.validate();
    std::unique_ptr<Instance> shared;
    if (!spec.vary_instance) shared = make_instance(spec.generator, needs_spd(spec.solver));

    std::vector<TrialOutput> outputs(spec.trials);
    parallel_for(spec.trials, spec.jobs, [&](std::size_t t) {
        if (shared) {
            outputs[t] = run_trial(spec, *shared, t);
            return;
        }
        GeneratorSpec g = spec.generator;
        g.seed = derive_seed(spec.generator.seed, t);
        try {
            const auto inst = make_instance(g, needs_spd(spec.solver));
            outputs[t] = run_trial(spec, *inst, t);
        } catch (const Error& e) {
            outputs[t].record.solver = to_string(spec.solver);
            outputs[t].record.trial = t;
            outputs[t].record.seed = derive_seed(spec.config.seed, t);
            outputs[t].record.final_error = std::numeric_limits<double>::quiet_NaN();
            outputs[t].record.error = e.kind() + ": " + e.what();
        }
    });

    ConvergenceResult result;
    double iter_sum = 0.0, phi_sum = 0.0;
    std::size_t iter_count = 0, phi_count = 0;
    for (const auto& o : outputs) {
        result.records.push_back(o.record);
        if (o.record.iterations_to_threshold) {
            iter_sum += static_cast<double>(*o.record.iterations_to_threshold);
            ++iter_count;
        }
        if (o.record.phi) {
            phi_sum += *o.record.phi;
            ++phi_count;
        }
    }
    if (iter_count > 0) result.mean_iterations_to_threshold = iter_sum / static_cast<double>(iter_count);
    if (phi_count > 0) result.mean_phi = phi_sum / static_cast<double>(phi_count);

    // Error curve over the steps every successful trial recorded.
    std::map<std::size_t, std::vector<double>> by_step;
    std::size_t ok = 0;
    for (const auto& o : outputs) {
        if (!o.record.error.empty() || o.x_star_norm <= 0.0) continue;
        ++ok;
        for (const auto& r : o.trace) {
            const double e = r.error_norm / o.x_star_norm;
            by_step[r.step].push_back(e * e);
        }
    }
    for (auto& [step, errs] : by_step) {
        if (errs.size() != ok) continue;
        double mean = 0.0;
        for (double e : errs) mean += e;
        result.curve.push_back({step, mean / static_cast<double>(errs.size()), median_of(errs)});
    }
    return result;
}

ScalingResult run_scaling_experiment(const ExperimentSpec& spec)
{
    if (spec.kappa_grid.size() < 2) throw InvalidInput("scaling experiment needs at least two kappa values");
    ScalingResult result;
    std::vector<double> log_k, log_it;
    for (double kappa : spec.kappa_grid) {
        ExperimentSpec one = spec;
        one.generator.kappa = kappa;
        ConvergenceResult r = run_convergence_experiment(one);

        ScalingPoint p;
        double phi_sum = 0.0, it_sum = 0.0;
        std::size_t phi_n = 0;
        for (auto& rec : r.records) {
            if (rec.error.empty()) {
                p.kappa = rec.kappa;
                p.kappa_f = rec.kappa_f;
            }
            if (rec.iterations_to_threshold) {
                it_sum += static_cast<double>(*rec.iterations_to_threshold);
                ++p.reached;
            }
            if (rec.phi) {
                phi_sum += *rec.phi;
                ++phi_n;
            }
            result.records.push_back(std::move(rec));
        }
        if (p.reached > 0) {
            p.mean_iterations_to_threshold = it_sum / static_cast<double>(p.reached);
            log_k.push_back(std::log(p.kappa));
            log_it.push_back(std::log(p.mean_iterations_to_threshold));
        }
        if (phi_n > 0) p.mean_phi = phi_sum / static_cast<double>(phi_n);
        result.points.push_back(p);
    }
    result.slope_kappa = log_k.size() >= 2 ? oracle::fit_slope(log_k, log_it)
                                           : std::numeric_limits<double>::quiet_NaN();
    return result;
}

void write_outputs(const ExperimentSpec& spec, const std::vector<TrialRecord>& records)
{
    for (const auto& path : spec.outputs) save_report(records, path, format_for_path(path));
}

} // namespace qis::bench
