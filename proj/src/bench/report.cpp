#include "qisolve/bench/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <ostream>

#include "qisolve/errors.hpp"

namespace qis::bench {

namespace {

std::string fmt(double v)
{
    if (std::isnan(v)) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_quote(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

nlohmann::json num(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

} // namespace

ReportFormat parse_report_format(const std::string& name)
{
    if (name == "csv") return ReportFormat::csv;
    if (name == "json") return ReportFormat::json;
    throw InvalidInput("unknown report format '" + name + "'");
}

ReportFormat format_for_path(const std::string& path)
{
    const auto dot = path.rfind('.');
    return dot != std::string::npos && path.substr(dot) == ".json" ? ReportFormat::json : ReportFormat::csv;
}

void write_report(std::ostream& out, const std::vector<TrialRecord>& records, ReportFormat format)
{
    if (format == ReportFormat::csv) {
        out << "solver,trial,seed,m,n,s,kappa,kappa_f,epsilon,d,T,q,final_error,iterations,"
               "iterations_to_threshold,wall_time_s,phi,max_step_flops,support_size,error\n";
        for (const auto& r : records) {
            out << csv_quote(r.solver) << ',' << r.trial << ',' << r.seed << ',' << r.m << ',' << r.n << ','
                << r.s << ',' << fmt(r.kappa) << ',' << fmt(r.kappa_f) << ',' << fmt(r.epsilon) << ',' << r.d
                << ',' << r.T << ',' << r.q << ',' << fmt(r.final_error) << ',' << r.iterations << ',';
            if (r.iterations_to_threshold) out << *r.iterations_to_threshold;
            out << ',' << fmt(r.wall_time_s) << ',' << (r.phi ? fmt(*r.phi) : "") << ',' << r.max_step_flops
                << ',' << r.support_size << ',' << csv_quote(r.error) << '\n';
        }
        return;
    }
    auto arr = nlohmann::json::array();
    for (const auto& r : records) {
        arr.push_back({
            {"solver", r.solver},
            {"trial", r.trial},
            {"seed", r.seed},
            {"m", r.m},
            {"n", r.n},
            {"s", r.s},
            {"kappa", num(r.kappa)},
            {"kappa_f", num(r.kappa_f)},
            {"epsilon", num(r.epsilon)},
            {"d", r.d},
            {"T", r.T},
            {"q", r.q},
            {"final_error", num(r.final_error)},
            {"iterations", r.iterations},
            {"iterations_to_threshold",
             r.iterations_to_threshold ? nlohmann::json(*r.iterations_to_threshold) : nlohmann::json(nullptr)},
            {"wall_time_s", num(r.wall_time_s)},
            {"phi", r.phi ? num(*r.phi) : nlohmann::json(nullptr)},
            {"max_step_flops", r.max_step_flops},
            {"support_size", r.support_size},
            {"error", r.error.empty() ? nlohmann::json(nullptr) : nlohmann::json(r.error)},
        });
    }
    out << arr.dump(2) << '\n';
}

void save_report(const std::vector<TrialRecord>& records, const std::string& path, ReportFormat format)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot write '" + path + "'");
    write_report(out, records, format);
    if (!out) throw InvalidInput("write to '" + path + "' failed");
}

} // namespace qis::bench
