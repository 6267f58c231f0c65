#include "specspmv/matrix_market.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace specspmv {
namespace {

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

bool blank(const std::string& s) {
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

CooMatrix parse_matrix_market(std::istream& in) {
  std::string line;
  long lineno = 0;

  if (!std::getline(in, line)) {
    throw MatrixMarketError("empty input, expected Matrix Market header", 1);
  }
  ++lineno;

  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket") {
    throw MatrixMarketError("malformed header: expected %%MatrixMarket banner", lineno);
  }
  object = lower(object);
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (object != "matrix" || format != "coordinate") {
    throw MatrixMarketError("unsupported header: only 'matrix coordinate' is accepted",
                            lineno);
  }
  const bool pattern = field == "pattern";
  if (field != "real" && field != "integer" && !pattern) {
    throw MatrixMarketError("unsupported field '" + field +
                                "', expected real, integer or pattern",
                            lineno);
  }
  const bool symmetric = symmetry == "symmetric";
  if (symmetry != "general" && !symmetric) {
    throw MatrixMarketError("unsupported symmetry '" + symmetry +
                                "', expected general or symmetric",
                            lineno);
  }

  long long m = -1, n = -1, declared = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line[0] == '%') continue;
    if (blank(line)) continue;
    std::istringstream sizes(line);
    if (!(sizes >> m >> n >> declared) || m < 0 || n < 0 || declared < 0) {
      throw MatrixMarketError("malformed size line, expected 'rows cols nnz'", lineno);
    }
    std::string trailing;
    if (sizes >> trailing) {
      throw MatrixMarketError("malformed size line, expected 'rows cols nnz'", lineno);
    }
    break;
  }
  if (m < 0) {
    throw MatrixMarketError("missing size line", lineno);
  }

  CooMatrix coo;
  coo.num_rows = static_cast<index_t>(m);
  coo.num_cols = static_cast<index_t>(n);
  coo.rows.reserve(static_cast<std::size_t>(declared));
  coo.cols.reserve(static_cast<std::size_t>(declared));
  coo.values.reserve(static_cast<std::size_t>(declared));

  long long seen = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line[0] == '%') continue;
    if (blank(line)) continue;

    std::istringstream entry(line);
    long long r = 0, c = 0;
    double v = 1.0;
    if (!(entry >> r >> c)) {
      throw MatrixMarketError("malformed entry, expected 'row col" +
                                  std::string(pattern ? "'" : " value'"),
                              lineno);
    }
    if (!pattern && !(entry >> v)) {
      throw MatrixMarketError("malformed entry, expected 'row col value'", lineno);
    }
    std::string trailing;
    if (entry >> trailing) {
      throw MatrixMarketError("malformed entry: trailing token '" + trailing + "'",
                              lineno);
    }
    if (r < 1 || r > m) {
      throw MatrixMarketError("row index " + std::to_string(r) + " out of bounds [1, " +
                                  std::to_string(m) + "]",
                              lineno);
    }
    if (c < 1 || c > n) {
      throw MatrixMarketError("column index " + std::to_string(c) +
                                  " out of bounds [1, " + std::to_string(n) + "]",
                              lineno);
    }
    ++seen;
    if (seen > declared) {
      throw MatrixMarketError("entry count mismatch: header declares " +
                                  std::to_string(declared) + " entries, file has more",
                              lineno);
    }
    coo.rows.push_back(static_cast<index_t>(r - 1));
    coo.cols.push_back(static_cast<index_t>(c - 1));
    coo.values.push_back(v);
    if (symmetric && r != c) {
      coo.rows.push_back(static_cast<index_t>(c - 1));
      coo.cols.push_back(static_cast<index_t>(r - 1));
      coo.values.push_back(v);
    }
  }
  if (seen != declared) {
    throw MatrixMarketError("entry count mismatch: header declares " +
                                std::to_string(declared) + " entries, file contains " +
                                std::to_string(seen),
                            lineno + 1);
  }
  return coo;
}

CooMatrix parse_matrix_market_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw MatrixMarketError("cannot open '" + path + "' for reading", 0);
  }
  return parse_matrix_market(in);
}

void write_matrix_market(std::ostream& out, const CsrMatrix<double>& a) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.num_rows << ' ' << a.num_cols << ' ' << a.nnz() << '\n';
  char buf[64];
  for (index_t r = 0; r < a.num_rows; ++r) {
    for (index_t p = a.row_ptr[r]; p < a.row_ptr[r + 1]; ++p) {
      std::snprintf(buf, sizeof(buf), "%.17g", a.values[p]);
      out << (r + 1) << ' ' << (a.col_idx[p] + 1) << ' ' << buf << '\n';
    }
  }
}

void write_matrix_market_file(const std::string& path, const CsrMatrix<double>& a) {
  std::ofstream out(path);
  if (!out) {
    throw MatrixMarketError("cannot open '" + path + "' for writing", 0);
  }
  write_matrix_market(out, a);
  out.flush();
  if (!out) {
    throw MatrixMarketError("failed writing '" + path + "'", 0);
  }
}

}  // namespace specspmv
