#include "qisolve/bench/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "qisolve/errors.hpp"

namespace qis::bench {

namespace {

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

bool blank(const std::string& line)
{
    return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

enum class Symmetry { general, symmetric, skew };

class LineReader {
public:
    LineReader(std::istream& in, const std::string& source) : in_(in), source_(source) {}

    /// Next non-comment, non-blank line; false at end of input.
    bool next(std::string& line)
    {
        while (std::getline(in_, line)) {
            ++line_no_;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty() || line[0] == '%' || blank(line)) continue;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(source_, line_no_, what); }
    std::size_t line() const noexcept { return line_no_; }
    void count_header() { ++line_no_; }

private:
    std::istream& in_;
    const std::string& source_;
    std::size_t line_no_ = 0;
};

double parse_number(const std::string& tok, const LineReader& r)
{
    double v = 0.0;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    if (!tok.empty() && *first == '+') ++first;
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) r.fail("malformed number '" + tok + "'");
    if (!std::isfinite(v)) r.fail("non-finite value '" + tok + "'");
    return v;
}

std::size_t parse_index(const std::string& tok, const LineReader& r)
{
    std::size_t v = 0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) r.fail("malformed integer '" + tok + "'");
    return v;
}

std::vector<std::string> tokens(const std::string& line)
{
    std::istringstream ss(line);
    std::vector<std::string> out;
    std::string t;
    while (ss >> t) out.push_back(t);
    return out;
}

} // namespace

CsrMatrix read_matrix_market(std::istream& in, const std::string& source)
{
    LineReader r(in, source);
    std::string header;
    if (!std::getline(in, header)) r.fail("empty input");
    r.count_header();
    const auto h = tokens(lower(header));
    if (h.size() != 5 || h[0] != "%%matrixmarket" || h[1] != "matrix")
        r.fail("expected '%%MatrixMarket matrix <format> <field> <symmetry>' header");
    const bool coordinate = h[2] == "coordinate";
    if (!coordinate && h[2] != "array") r.fail("unsupported format '" + h[2] + "'");
    const std::string& field = h[3];
    const bool pattern = field == "pattern";
    if (field != "real" && field != "integer" && field != "double" && !pattern)
        r.fail("unsupported field '" + field + "'");
    if (pattern && !coordinate) r.fail("pattern field requires coordinate format");
    Symmetry sym;
    if (h[4] == "general") sym = Symmetry::general;
    else if (h[4] == "symmetric") sym = Symmetry::symmetric;
    else if (h[4] == "skew-symmetric") sym = Symmetry::skew;
    else r.fail("unsupported symmetry '" + h[4] + "'");

    std::string line;
    if (!r.next(line)) r.fail("missing size line");
    const auto sz = tokens(line);
    if (sz.size() != (coordinate ? 3u : 2u)) r.fail("malformed size line");
    const std::size_t m = parse_index(sz[0], r);
    const std::size_t n = parse_index(sz[1], r);
    if (m == 0 || n == 0) r.fail("matrix dimensions must be positive");
    if (sym != Symmetry::general && m != n) r.fail("symmetric storage needs a square matrix");

    std::map<std::pair<std::size_t, std::size_t>, double> entries;
    auto put = [&](std::size_t i, std::size_t j, double v) {
        entries[{i, j}] += v;
        if (i != j && sym == Symmetry::symmetric) entries[{j, i}] += v;
        if (i != j && sym == Symmetry::skew) entries[{j, i}] -= v;
    };

    if (coordinate) {
        const std::size_t nnz = parse_index(sz[2], r);
        for (std::size_t k = 0; k < nnz; ++k) {
            if (!r.next(line))
                r.fail("expected " + std::to_string(nnz) + " entries, found " + std::to_string(k));
            const auto t = tokens(line);
            if (t.size() != (pattern ? 2u : 3u)) r.fail("malformed entry line");
            const std::size_t i = parse_index(t[0], r);
            const std::size_t j = parse_index(t[1], r);
            if (i < 1 || i > m || j < 1 || j > n) r.fail("entry (" + t[0] + ", " + t[1] + ") outside the matrix");
            if (sym == Symmetry::skew && i == j) r.fail("skew-symmetric matrix with a diagonal entry");
            if (sym != Symmetry::general && j > i) r.fail("symmetric storage lists the lower triangle only");
            put(i - 1, j - 1, pattern ? 1.0 : parse_number(t[2], r));
        }
    } else {
        // Column-major; symmetric variants list the lower triangle.
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t start = sym == Symmetry::general ? 0 : (sym == Symmetry::skew ? j + 1 : j);
            for (std::size_t i = start; i < m; ++i) {
                if (!r.next(line)) r.fail("array data ended early");
                const auto t = tokens(line);
                if (t.size() != 1) r.fail("expected a single value per line");
                const double v = parse_number(t[0], r);
                if (v != 0.0 || sym == Symmetry::general) put(i, j, v);
            }
        }
    }
    if (r.next(line)) r.fail("unexpected data after the last entry");

    CsrMatrix a;
    a.rows = m;
    a.cols = n;
    a.row_ptr.assign(m + 1, 0);
    a.col_idx.reserve(entries.size());
    a.values.reserve(entries.size());
    for (const auto& [ij, v] : entries) {
        ++a.row_ptr[ij.first + 1];
        a.col_idx.push_back(ij.second);
        a.values.push_back(v);
    }
    for (std::size_t i = 0; i < m; ++i) a.row_ptr[i + 1] += a.row_ptr[i];
    return a;
}

CsrMatrix load_matrix_market(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ParseError(path, 0, "cannot open file");
    return read_matrix_market(in, path);
}

void write_matrix_market(std::ostream& out, const DenseMatrix& a)
{
    out << "%%MatrixMarket matrix array real general\n" << a.rows << ' ' << a.cols << '\n';
    for (std::size_t j = 0; j < a.cols; ++j)
        for (std::size_t i = 0; i < a.rows; ++i) out << fmt(a(i, j)) << '\n';
}

void write_matrix_market(std::ostream& out, const CsrMatrix& a)
{
    out << "%%MatrixMarket matrix coordinate real general\n"
        << a.rows << ' ' << a.cols << ' ' << a.nnz() << '\n';
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p)
            out << i + 1 << ' ' << a.col_idx[p] + 1 << ' ' << fmt(a.values[p]) << '\n';
}

namespace {

template <class M>
void save_to(const std::string& path, const M& a)
{
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot write '" + path + "'");
    write_matrix_market(out, a);
    if (!out) throw InvalidInput("write to '" + path + "' failed");
}

} // namespace

void save_matrix_market(const std::string& path, const DenseMatrix& a) { save_to(path, a); }
void save_matrix_market(const std::string& path, const CsrMatrix& a) { save_to(path, a); }

std::vector<double> load_vector(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ParseError(path, 0, "cannot open file");
    if (in.peek() == '%') {
        const CsrMatrix a = read_matrix_market(in, path);
        if (a.rows != 1 && a.cols != 1) throw ParseError(path, 1, "expected an n x 1 or 1 x n matrix");
        const DenseMatrix d = a.to_dense();
        return d.values;
    }
    std::vector<double> v;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line[0] == '#') continue;
        std::istringstream ss(line);
        std::string tok;
        while (ss >> tok) {
            double x = 0.0;
            const char* first = tok.data();
            const char* last = first + tok.size();
            if (*first == '+') ++first;
            const auto res = std::from_chars(first, last, x);
            if (res.ec != std::errc() || res.ptr != last || !std::isfinite(x))
                throw ParseError(path, line_no, "malformed number '" + tok + "'");
            v.push_back(x);
        }
    }
    if (v.empty()) throw ParseError(path, line_no, "no values");
    return v;
}

void save_vector(const std::string& path, const std::vector<double>& v)
{
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot write '" + path + "'");
    for (double x : v) out << fmt(x) << '\n';
}

} // namespace qis::bench
