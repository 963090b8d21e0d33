#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "qisolve/bench/experiment.hpp"
#include "qisolve/bench/generator.hpp"
#include "qisolve/bench/matrix_market.hpp"
#include "qisolve/bench/report.hpp"
#include "qisolve/errors.hpp"

namespace qb = qis::bench;
namespace fs = std::filesystem;

namespace {

std::string data_path(const std::string& name) { return std::string(QISOLVE_TEST_DATA) + "/" + name; }

fs::path scratch(const std::string& name)
{
    const auto dir = fs::temp_directory_path() / "qisolve_test_bench";
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

qis::CsrMatrix parse(const std::string& text)
{
    std::istringstream in(text);
    return qb::read_matrix_market(in, "inline");
}

std::size_t parse_error_line(const std::string& text)
{
    try {
        parse(text);
    } catch (const qis::ParseError& e) {
        return e.line();
    }
    return 0;
}

} // namespace

TEST_SUITE("generator")
{
    TEST_CASE("flat profile")
    {
        qb::GeneratorSpec g;
        g.m = 12;
        g.n = 7;
        g.profile = qb::Profile::flat;
        const auto p = qb::generate_problem(g);
        CHECK(p.spectrum.kappa == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(p.spectrum.kappa_f == doctest::Approx(std::sqrt(7.0)).epsilon(1e-10));
    }

    TEST_CASE("two singular values")
    {
        qb::GeneratorSpec g;
        g.m = g.n = 2;
        g.profile = qb::Profile::explicit_values;
        g.singular_values = {1.0, 0.1};
        CHECK(qb::generate_problem(g).spectrum.kappa == doctest::Approx(10.0).epsilon(1e-10));
    }

    TEST_CASE("requested kappa round trip on 100x50")
    {
        qb::GeneratorSpec g;
        g.m = 100;
        g.n = 50;
        g.kappa = 10;
        g.seed = 3;
        const auto p = qb::generate_problem(g);
        CHECK(std::abs(p.spectrum.kappa - 10.0) <= 1e-6);
        const auto expect = qb::singular_profile(g, 50);
        for (std::size_t i = 0; i < 50; ++i) REQUIRE(std::abs(p.spectrum.singular_values[i] - expect[i]) <= 1e-8);
        CHECK(expect.front() == 1.0);
        CHECK(expect.back() == doctest::Approx(0.1));
    }

    TEST_CASE("profiles lie in [1/kappa, 1]")
    {
        for (auto prof : {qb::Profile::geometric, qb::Profile::linear}) {
            qb::GeneratorSpec g;
            g.profile = prof;
            g.kappa = 7;
            const auto s = qb::singular_profile(g, 9);
            CHECK(s.front() == 1.0);
            CHECK(s.back() == doctest::Approx(1.0 / 7));
            CHECK(std::is_sorted(s.rbegin(), s.rend()));
        }
        qb::GeneratorSpec bad;
        bad.kappa = 0.5;
        CHECK_THROWS_AS(qb::singular_profile(bad, 3), qis::GenerationError);
        bad.profile = qb::Profile::explicit_values;
        bad.singular_values = {1.0, 1.5};
        CHECK_THROWS_AS(qb::singular_profile(bad, 2), qis::GenerationError);
    }

    TEST_CASE("row-sparse path keeps the spectrum and the sparsity")
    {
        qb::GeneratorSpec g;
        g.m = 80;
        g.n = 40;
        g.sparsity = 5;
        g.kappa = 6;
        g.seed = 9;
        const auto p = qb::generate_problem(g);
        for (std::size_t i = 0; i < g.m; ++i) {
            std::size_t nnz = 0;
            for (std::size_t j = 0; j < g.n; ++j) nnz += p.a(i, j) != 0.0;
            REQUIRE(nnz <= 5);
        }
        CHECK(p.spectrum.kappa == doctest::Approx(6.0).epsilon(1e-8));
        g.m = 3;
        CHECK_THROWS_AS(qb::generate_matrix(g), qis::GenerationError);
    }

    TEST_CASE("SPD paths")
    {
        qb::GeneratorSpec g;
        g.m = g.n = 20;
        g.spd = true;
        g.kappa = 5;
        const auto a = qb::generate_matrix(g);
        for (std::size_t i = 0; i < 20; ++i)
            for (std::size_t j = 0; j < 20; ++j) REQUIRE(a(i, j) == a(j, i));
        CHECK(qis::oracle::smallest_eigenvalue(a) == doctest::Approx(0.2).epsilon(1e-8));

        g.diagonally_dominant = true;
        g.sparsity = 4;
        const auto dd = qb::generate_matrix(g);
        for (std::size_t i = 0; i < 20; ++i) {
            double off = 0;
            for (std::size_t j = 0; j < 20; ++j)
                if (j != i) off += std::abs(dd(i, j));
            REQUIRE(dd(i, i) > off);
        }
        g.m = 21;
        CHECK_THROWS_AS(qb::generate_matrix(g), qis::GenerationError);
    }

    TEST_CASE("right-hand sides")
    {
        qb::GeneratorSpec g;
        g.m = 30;
        g.n = 10;
        g.seed = 4;
        const auto c = qb::generate_problem(g);
        CHECK(th::norm(c.x_planted) == doctest::Approx(1.0));
        CHECK(c.residual_norm <= 1e-12);
        CHECK(th::dist(c.x_star, c.x_planted) <= 1e-10);

        g.consistent = false;
        g.residual_norm = 0.7;
        const auto z = qb::generate_problem(g);
        CHECK(z.residual_norm == doctest::Approx(0.7).epsilon(1e-10));
        CHECK(th::dist(z.x_star, c.x_star) <= 1e-10);

        g.m = 5;  // full row rank: nothing orthogonal to the range
        CHECK_THROWS_AS(qb::generate_problem(g), qis::GenerationError);
    }

    TEST_CASE("generation is a function of the seed")
    {
        qb::GeneratorSpec g;
        g.m = 10;
        g.n = 6;
        g.seed = 77;
        CHECK(qb::generate_matrix(g).values == qb::generate_matrix(g).values);
        auto h = g;
        h.seed = 78;
        CHECK(qb::generate_matrix(g).values != qb::generate_matrix(h).values);
    }
}

TEST_SUITE("matrix market")
{
    TEST_CASE("array round trip is bit exact")
    {
        const auto a = th::random_dense(10, 10, 5);
        std::stringstream ss;
        qb::write_matrix_market(ss, a);
        const auto back = qb::read_matrix_market(ss).to_dense();
        CHECK(back.values == a.values);
    }

    TEST_CASE("coordinate round trip keeps the pattern")
    {
        auto d = th::random_dense(7, 5, 6);
        for (std::size_t k = 0; k < d.values.size(); k += 2) d.values[k] = 0.0;
        const auto csr = qis::CsrMatrix::from_dense(d);
        std::stringstream ss;
        qb::write_matrix_market(ss, csr);
        const auto back = qb::read_matrix_market(ss);
        CHECK(back.row_ptr == csr.row_ptr);
        CHECK(back.col_idx == csr.col_idx);
        CHECK(back.values == csr.values);
    }

    TEST_CASE("coordinates are one-based")
    {
        const auto a = parse("%%MatrixMarket matrix coordinate real general\n2 3 1\n1 1 5.0\n");
        const auto d = a.to_dense();
        CHECK(d(0, 0) == 5.0);
        CHECK(a.nnz() == 1);
    }

    TEST_CASE("explicit zeros stay in the pattern")
    {
        const auto a = parse("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 0\n2 2 3\n");
        CHECK(a.nnz() == 2);
    }

    TEST_CASE("reference fixtures")
    {
        // Written by scipy.io.mmwrite; norms computed by numpy.
        const auto g = qb::load_matrix_market(data_path("fixture_general.mtx"));
        CHECK(g.rows == 12);
        CHECK(g.cols == 9);
        CHECK(g.nnz() == 32);
        const auto gd = g.to_dense();
        CHECK(th::norm(gd.values) == doctest::Approx(4.7974529878213135).epsilon(1e-15));
        double sum = 0;
        for (double v : gd.values) sum += v;
        CHECK(sum == doctest::Approx(-5.3237145345317396).epsilon(1e-14));

        const auto s = qb::load_matrix_market(data_path("fixture_symmetric.mtx"));
        CHECK(s.nnz() == 22);
        const auto sd = s.to_dense();
        CHECK(th::norm(sd.values) == doctest::Approx(30.099833886584822).epsilon(1e-15));
        for (std::size_t i = 0; i < 6; ++i)
            for (std::size_t j = 0; j < 6; ++j) REQUIRE(sd(i, j) == sd(j, i));
    }

    TEST_CASE("pattern and skew-symmetric")
    {
        const auto p = parse("%%MatrixMarket matrix coordinate pattern general\n2 2 2\n1 2\n2 1\n").to_dense();
        CHECK(p(0, 1) == 1.0);
        CHECK(p(1, 0) == 1.0);
        const auto k = parse("%%MatrixMarket matrix coordinate real skew-symmetric\n3 3 1\n3 1 2.5\n").to_dense();
        CHECK(k(2, 0) == 2.5);
        CHECK(k(0, 2) == -2.5);
        const auto arr = parse("%%MatrixMarket matrix array real symmetric\n2 2\n1\n2\n3\n").to_dense();
        CHECK(arr.values == std::vector<double>{1, 2, 2, 3});
    }

    TEST_CASE("errors carry line numbers")
    {
        CHECK(parse_error_line("%%MatrixMarket matrix coordinate real general\n% c\n2 2 2\n1 1 1\n3 1 1\n") == 5);
        CHECK(parse_error_line("%%MatrixMarket matrix coordinate real general\n2 2 3\n1 1 1\n2 2 x\n") == 4);
        CHECK(parse_error_line("%%MatrixMarket vector coordinate real general\n") == 1);
        CHECK(parse_error_line("%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n") == 5);
        CHECK(parse_error_line("%%MatrixMarket matrix array real general\n2 x\n") == 2);
        CHECK(parse_error_line("%%MatrixMarket matrix coordinate real general\n1 1 1\n1 1 1\n1 1 2\n") == 4);
        CHECK_THROWS_AS(qb::load_matrix_market(scratch("missing.mtx").string()), qis::ParseError);
    }

    TEST_CASE("vectors from text and from array files")
    {
        const auto txt = scratch("v.txt");
        std::ofstream(txt) << "1.5 -2\n# comment\n3e-1\n";
        CHECK(qb::load_vector(txt.string()) == std::vector<double>{1.5, -2, 0.3});
        const std::vector<double> v{0.1, 1.0 / 3.0, -7e-300};
        const auto out = scratch("w.txt");
        qb::save_vector(out.string(), v);
        CHECK(qb::load_vector(out.string()) == v);
        const auto mtx = scratch("w.mtx");
        qis::DenseMatrix col(3, 1);
        col.values = v;
        qb::save_matrix_market(mtx.string(), col);
        CHECK(qb::load_vector(mtx.string()) == v);
        std::ofstream(txt) << "1 2 oops\n";
        CHECK_THROWS_AS(qb::load_vector(txt.string()), qis::ParseError);
    }
}

TEST_SUITE("experiments")
{
    qb::ExperimentSpec small_spec()
    {
        qb::ExperimentSpec s;
        s.generator.m = 40;
        s.generator.n = 20;
        s.generator.kappa = 3;
        s.generator.seed = 2;
        s.solver = qb::SolverKind::dual_sampled;
        s.config.epsilon = 0.3;
        s.config.seed = 17;
        s.trials = 6;
        s.record_timing = false;
        return s;
    }

    TEST_CASE("reports are byte identical across runs and job counts")
    {
        auto spec = small_spec();
        const auto a = qb::run_convergence_experiment(spec);
        spec.jobs = 3;
        const auto b = qb::run_convergence_experiment(spec);
        for (auto fmt : {qb::ReportFormat::csv, qb::ReportFormat::json}) {
            std::ostringstream sa, sb;
            qb::write_report(sa, a.records, fmt);
            qb::write_report(sb, b.records, fmt);
            CHECK(sa.str() == sb.str());
        }
        for (std::size_t t = 0; t < a.records.size(); ++t) {
            CHECK(a.records[t].trial == t);
            CHECK(a.records[t].seed == qis::derive_seed(17, t));
        }
    }

    TEST_CASE("records carry the schema")
    {
        const auto r = qb::run_convergence_experiment(small_spec());
        REQUIRE(r.records.size() == 6);
        std::ostringstream ss;
        qb::write_report(ss, r.records, qb::ReportFormat::json);
        const auto j = nlohmann::json::parse(ss.str());
        for (const char* key : {"solver", "seed", "m", "n", "s", "kappa", "kappa_f", "epsilon", "d", "T", "q",
                                "final_error", "iterations", "wall_time_s", "phi"})
            CHECK(j[0].contains(key));
        CHECK(j[0]["solver"] == "dual-sampled");
        CHECK(j[0]["phi"].is_number());
        std::ostringstream cs;
        qb::write_report(cs, r.records, qb::ReportFormat::csv);
        std::string header;
        std::istringstream(cs.str()) >> header;
        CHECK(header.find("solver,trial,seed,m,n,s,kappa,kappa_f,epsilon,d,T,q,final_error,iterations") == 0);
        CHECK(r.mean_phi.has_value());
        CHECK_FALSE(r.curve.empty());
    }

    TEST_CASE("rank-one instance is solved in ln(2/eps^2) steps")
    {
        qb::ExperimentSpec s;
        s.generator.m = 1;
        s.generator.n = 6;
        s.generator.profile = qb::Profile::flat;
        s.solver = qb::SolverKind::kaczmarz;
        s.config.epsilon = 0.1;
        s.config.T = static_cast<std::uint64_t>(std::ceil(std::log(2.0 / 0.01)));
        s.auto_schedule = false;
        s.trials = 5;
        const auto r = qb::run_convergence_experiment(s);
        for (const auto& rec : r.records) {
            CHECK(rec.kappa_f == doctest::Approx(1.0));
            CHECK(rec.final_error <= 1e-12);
        }
    }

    TEST_CASE("mean curve stays below three times the rate envelope")
    {
        qb::ExperimentSpec s;
        s.generator.m = 40;
        s.generator.n = 20;
        s.generator.kappa = 10;
        s.generator.seed = 8;
        s.solver = qb::SolverKind::kaczmarz;
        const auto p = qb::generate_problem(s.generator);
        const double kf2 = p.spectrum.kappa_f * p.spectrum.kappa_f;
        s.auto_schedule = false;
        s.config.T = static_cast<std::uint64_t>(std::ceil(2 * kf2));
        s.trials = 100;
        s.curve_points = 40;
        const auto r = qb::run_convergence_experiment(s);
        REQUIRE(r.curve.size() >= 40);
        for (const auto& pt : r.curve)
            REQUIRE(pt.mean_sq_error <= 3 * std::pow(1 - 1 / kf2, static_cast<double>(pt.step)));
    }

    TEST_CASE("trial failures are recorded, not thrown")
    {
        qb::ExperimentSpec s;
        s.generator.m = 4;
        s.generator.n = 6;
        s.generator.consistent = false;
        s.generator.residual_norm = 1.0;
        s.vary_instance = true;
        s.trials = 3;
        const auto r = qb::run_convergence_experiment(s);
        REQUIRE(r.records.size() == 3);
        for (const auto& rec : r.records) CHECK(rec.error.rfind("generation_error", 0) == 0);
    }

    TEST_CASE("scaling experiment fits a slope")
    {
        auto s = small_spec();
        s.solver = qb::SolverKind::kaczmarz;
        s.config.epsilon = 0.1;
        s.kappa_grid = {2, 4};
        s.trials = 4;
        const auto r = qb::run_scaling_experiment(s);
        CHECK(r.points.size() == 2);
        CHECK(r.records.size() == 8);
        CHECK(r.slope_kappa > 0.5);
    }

    TEST_CASE("spec parsing")
    {
        const auto s = qb::parse_experiment_spec(R"({
            "generator": {"m": 30, "n": 12, "profile": "linear", "kappa": 4, "sparsity": 3, "seed": 9},
            "solver": "averaged", "seed": 5, "epsilon": 0.2, "trials": 7, "jobs": 2,
            "timing": false, "kappa_grid": [2, 5], "outputs": ["a.csv"]})");
        CHECK(s.generator.m == 30);
        CHECK(s.generator.profile == qb::Profile::linear);
        CHECK(s.generator.sparsity == 3);
        CHECK(s.solver == qb::SolverKind::averaged);
        CHECK(s.config.seed == 5);
        CHECK(s.config.epsilon == 0.2);
        CHECK(s.trials == 7);
        CHECK_FALSE(s.record_timing);
        CHECK(s.auto_schedule);
        CHECK(s.kappa_grid == std::vector<double>{2, 5});
        CHECK_THROWS_AS(qb::parse_experiment_spec("{not json"), qis::ParseError);
        CHECK_THROWS_AS(qb::parse_experiment_spec(R"({"trials": "many"})"), qis::ParseError);
        CHECK_THROWS_AS(qb::parse_experiment_spec(R"({"solver": "cg"})"), qis::InvalidInput);
        auto bad = s;
        bad.trials = 0;
        CHECK_THROWS_AS(bad.validate(), qis::InvalidInput);
    }

    TEST_CASE("report files")
    {
        const auto r = qb::run_convergence_experiment(small_spec());
        const auto csv = scratch("r.csv"), json = scratch("r.json");
        qb::save_report(r.records, csv.string(), qb::format_for_path(csv.string()));
        qb::save_report(r.records, json.string(), qb::format_for_path(json.string()));
        CHECK(slurp(csv).rfind("solver,", 0) == 0);
        CHECK(nlohmann::json::parse(slurp(json)).size() == 6);
    }
}
