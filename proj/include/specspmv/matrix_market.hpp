#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "specspmv/csr.hpp"

namespace specspmv {

// Parse or write failures carry the 1-based line number of the offending line
// (0 when the failure is not tied to a line, e.g. an unreadable file).
class MatrixMarketError : public std::runtime_error {
 public:
  MatrixMarketError(std::string message, long line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message
                                    : message),
        line_(line) {}
  long line() const { return line_; }

 private:
  long line_;
};

// Reads a Matrix Market coordinate file. Accepted fields: real, integer,
// pattern (entries get value 1.0). Accepted symmetries: general, symmetric
// (off-diagonal entries are mirrored at load). Indices are 1-based on disk
// and 0-based in the returned matrix.
CooMatrix parse_matrix_market(std::istream& in);
CooMatrix parse_matrix_market_file(const std::string& path);

// Writes canonical CSR as "matrix coordinate real general" with 1-based
// indices and %.17g values, so parse(write(m)) reproduces m exactly.
void write_matrix_market(std::ostream& out, const CsrMatrix<double>& a);
void write_matrix_market_file(const std::string& path, const CsrMatrix<double>& a);

}  // namespace specspmv
