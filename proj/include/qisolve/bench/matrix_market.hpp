#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qisolve/matrix.hpp"

namespace qis::bench {

/// Reads a Matrix Market file (coordinate real/integer/pattern or array
/// real/integer; general, symmetric or skew-symmetric). Coordinate entries
/// keep their pattern, explicit zeros included; duplicates are summed.
/// Throws ParseError carrying the 1-based line number.
CsrMatrix read_matrix_market(std::istream& in, const std::string& source = "<stream>");
CsrMatrix load_matrix_market(const std::string& path);

/// Array format, column-major, values printed with %.17g.
void write_matrix_market(std::ostream& out, const DenseMatrix& a);
/// Coordinate format, 1-based, values printed with %.17g.
void write_matrix_market(std::ostream& out, const CsrMatrix& a);
void save_matrix_market(const std::string& path, const DenseMatrix& a);
void save_matrix_market(const std::string& path, const CsrMatrix& a);

/// A vector from a Matrix Market file (n x 1 or 1 x n) or from plain text
/// holding whitespace-separated numbers.
std::vector<double> load_vector(const std::string& path);
void save_vector(const std::string& path, const std::vector<double>& v);

} // namespace qis::bench
