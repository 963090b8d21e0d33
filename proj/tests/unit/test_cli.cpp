#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "helpers.hpp"
#include "qisolve/bench/matrix_market.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
    int status = -1;
    std::vector<json> lines;
    std::string err;
};

fs::path workdir()
{
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / "qisolve_test_cli";
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string p(const std::string& name) { return (workdir() / name).string(); }

Run run(const std::string& args, const std::string& env = "")
{
    const auto err_path = p("stderr.txt");
    const std::string cmd = env + " " + QISOLVE_CLI + " " + args + " 2>" + err_path;
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
    const int st = pclose(pipe);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    std::istringstream in(out);
    for (std::string line; std::getline(in, line);)
        if (!line.empty()) r.lines.push_back(json::parse(line));
    std::ifstream e(err_path);
    std::ostringstream es;
    es << e.rdbuf();
    r.err = es.str();
    return r;
}

void generate_fixture()
{
    static bool done = false;
    if (done) return;
    const auto r = run("gen --m 60 --n 25 --kappa 4 --seed 11 --out " + p("a.mtx") + " --rhs " + p("b.txt") +
                       " --solution " + p("xs.txt"));
    REQUIRE(r.status == 0);
    done = true;
}

} // namespace

TEST_CASE("gen writes a matrix with the requested conditioning")
{
    generate_fixture();
    const auto r = run("gen --m 60 --n 25 --kappa 4 --seed 11 --out " + p("a2.mtx"));
    REQUIRE(r.status == 0);
    REQUIRE(r.lines.size() == 1);
    CHECK(r.lines[0]["kappa"].get<double>() == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(r.lines[0]["rank"] == 25);
    const auto a = qis::bench::load_matrix_market(p("a.mtx")).to_dense();
    const auto b = qis::bench::load_matrix_market(p("a2.mtx")).to_dense();
    CHECK(a.values == b.values);
}

TEST_CASE("solve then query, sample and norm on the description")
{
    generate_fixture();
    const auto s = run("solve --matrix " + p("a.mtx") + " --rhs " + p("b.txt") +
                       " --solver dual-sampled --eps 0.2 --seed 3 --out " + p("desc.json") + " --x-out " + p("x.txt"));
    REQUIRE(s.status == 0);
    CHECK(s.lines[0]["solver"] == "dual-sampled");
    CHECK(s.lines[0]["support_size"].get<std::size_t>() >= 1);

    const auto x = qis::bench::load_vector(p("x.txt"));
    const auto xs = qis::bench::load_vector(p("xs.txt"));
    REQUIRE(x.size() == 25);
    CHECK(th::dist(x, xs) <= 0.2 * th::norm(xs) * 3);

    const auto q = run("query --description " + p("desc.json") + " --index 0 --index 7 --index 24");
    REQUIRE(q.status == 0);
    REQUIRE(q.lines.size() == 3);
    CHECK(q.lines[1]["index"] == 7);
    CHECK(q.lines[1]["value"].get<double>() == doctest::Approx(x[7]).epsilon(1e-12));

    const auto smp = run("sample --description " + p("desc.json") + " --count 50 --seed 4");
    REQUIRE(smp.status == 0);
    CHECK(smp.lines.size() == 50);
    for (const auto& l : smp.lines) REQUIRE(l["index"].get<std::size_t>() < 25);

    const auto nrm = run("norm --description " + p("desc.json") + " --eps 0.1 --seed 5");
    REQUIRE(nrm.status == 0);
    CHECK(std::abs(nrm.lines[0]["norm"].get<double>() - th::norm(x)) <= 0.1 * th::norm(x));
}

TEST_CASE("seed precedence: flag over environment")
{
    generate_fixture();
    const std::string base = "solve --matrix " + p("a.mtx") + " --rhs " + p("b.txt") + " --solver kaczmarz --eps 0.3";
    const auto env7 = run(base + " --x-out " + p("e7.txt"), "QISOLVE_SEED=7");
    const auto flag7 = run(base + " --seed 7 --x-out " + p("f7.txt"), "QISOLVE_SEED=99");
    const auto env8 = run(base + " --x-out " + p("e8.txt"), "QISOLVE_SEED=8");
    REQUIRE(env7.status == 0);
    REQUIRE(flag7.status == 0);
    CHECK(env7.lines[0]["seed"] == 7);
    CHECK(flag7.lines[0]["seed"] == 7);
    CHECK(env8.lines[0]["seed"] == 8);
    CHECK(qis::bench::load_vector(p("e7.txt")) == qis::bench::load_vector(p("f7.txt")));
    CHECK(qis::bench::load_vector(p("e7.txt")) != qis::bench::load_vector(p("e8.txt")));
}

TEST_CASE("bench output is reproducible across job counts")
{
    std::ofstream(p("spec.json")) << R"({"generator": {"m": 40, "n": 15, "kappa": 3, "seed": 1},
        "solver": "kaczmarz", "epsilon": 0.2, "trials": 5, "timing": false})";
    const std::string base = "bench --spec " + p("spec.json") + " --seed 12 ";
    const auto r1 = run(base + "--jobs 1 --out " + p("r1.csv"));
    const auto r2 = run(base + "--jobs 3 --out " + p("r2.csv"));
    REQUIRE(r1.status == 0);
    REQUIRE(r2.status == 0);
    std::ifstream f1(p("r1.csv")), f2(p("r2.csv"));
    std::stringstream s1, s2;
    s1 << f1.rdbuf();
    s2 << f2.rdbuf();
    CHECK_FALSE(s1.str().empty());
    CHECK(s1.str() == s2.str());
    CHECK(r1.lines[0]["seed"] == 12);
}

TEST_CASE("errors are reported as JSON with a nonzero exit")
{
    const auto missing = run("solve --matrix " + p("nope.mtx") + " --rhs " + p("b.txt"));
    CHECK(missing.status == 2);
    const auto e = json::parse(missing.err);
    CHECK(e["error"] == "parse_error");
    CHECK(e.contains("message"));

    std::ofstream(p("bad.mtx")) << "%%MatrixMarket matrix coordinate real general\n2 2 1\n3 3 1\n";
    const auto bad = run("solve --matrix " + p("bad.mtx") + " --rhs " + p("b.txt"));
    CHECK(bad.status == 2);
    CHECK(bad.err.find("bad.mtx:3:") != std::string::npos);

    generate_fixture();
    const auto eps = run("solve --matrix " + p("a.mtx") + " --rhs " + p("b.txt") + " --eps 1.5");
    CHECK(eps.status == 2);
    CHECK(json::parse(eps.err)["error"] == "invalid_input");

    CHECK(run("frobnicate").status != 0);
}
