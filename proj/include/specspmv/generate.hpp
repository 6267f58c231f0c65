#pragma once

#include <cstdint>
#include <string>

#include "specspmv/csr.hpp"

namespace specspmv {

enum class GenKind { dense, uniform, powerlaw, emptyrows };

const char* to_string(GenKind k);
GenKind gen_kind_from_string(const std::string& name);

// One real parameter whose meaning depends on kind:
//   dense     ignored
//   uniform   average nonzeros per row, in [0, n]
//   powerlaw  row-length exponent, > 1
//   emptyrows empty-row fraction, in [0, 1]
struct GenSpec {
  GenKind kind = GenKind::uniform;
  index_t num_rows = 0;
  index_t num_cols = 0;
  double param = 8.0;
  std::uint64_t seed = 0;
};

// Deterministic in the spec alone: same spec, same matrix, bit for bit.
// Throws std::invalid_argument on out-of-range parameters.
CsrMatrix<double> generate(const GenSpec& spec);

// Parses "kind:m=..,n=..[,param=..]:seed", e.g. "powerlaw:m=4096,n=4096,param=2.0:7".
// Accepted aliases for param: density, avgnnz, exponent, fraction.
GenSpec parse_genspec(const std::string& text);
std::string to_string(const GenSpec& spec);

}  // namespace specspmv
