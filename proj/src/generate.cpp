#include "specspmv/generate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>
#include <unordered_set>
#include <vector>

namespace specspmv {
namespace {

// mt19937_64 is fully specified by the standard; the transforms below avoid
// std::uniform_*_distribution, whose output is implementation-defined.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  return bound == 0 ? 0 : rng() % bound;
}

// Floyd's sampling: count distinct columns from [0, n), returned sorted.
std::vector<index_t> sample_columns(std::mt19937_64& rng, index_t n, index_t count) {
  std::unordered_set<index_t> chosen;
  chosen.reserve(static_cast<std::size_t>(count) * 2);
  for (index_t j = n - count; j < n; ++j) {
    const auto t = static_cast<index_t>(uniform_below(rng, static_cast<std::uint64_t>(j) + 1));
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  std::vector<index_t> cols(chosen.begin(), chosen.end());
  std::sort(cols.begin(), cols.end());
  return cols;
}

}  // namespace

const char* to_string(GenKind k) {
  switch (k) {
    case GenKind::dense: return "dense";
    case GenKind::uniform: return "uniform";
    case GenKind::powerlaw: return "powerlaw";
    case GenKind::emptyrows: return "emptyrows";
  }
  return "unknown";
}

GenKind gen_kind_from_string(const std::string& name) {
  if (name == "dense") return GenKind::dense;
  if (name == "uniform") return GenKind::uniform;
  if (name == "powerlaw") return GenKind::powerlaw;
  if (name == "emptyrows") return GenKind::emptyrows;
  throw std::invalid_argument("unknown generator kind '" + name + "'");
}

CsrMatrix<double> generate(const GenSpec& spec) {
  const index_t m = spec.num_rows;
  const index_t n = spec.num_cols;
  if (m < 0 || n < 0) {
    throw std::invalid_argument("generator dimensions must be non-negative");
  }
  switch (spec.kind) {
    case GenKind::dense:
      break;
    case GenKind::uniform:
      if (spec.param < 0.0 || spec.param > static_cast<double>(n)) {
        throw std::invalid_argument("uniform generator needs avg nonzeros per row in [0, n]");
      }
      break;
    case GenKind::powerlaw:
      if (!(spec.param > 1.0)) {
        throw std::invalid_argument("powerlaw generator needs exponent > 1");
      }
      break;
    case GenKind::emptyrows:
      if (spec.param < 0.0 || spec.param > 1.0) {
        throw std::invalid_argument("emptyrows generator needs fraction in [0, 1]");
      }
      break;
  }

  std::mt19937_64 rng(spec.seed);
  std::vector<index_t> length(static_cast<std::size_t>(m), 0);

  switch (spec.kind) {
    case GenKind::dense:
      std::fill(length.begin(), length.end(), n);
      break;
    case GenKind::uniform: {
      const auto per_row = static_cast<index_t>(std::llround(spec.param));
      std::fill(length.begin(), length.end(), std::min(per_row, n));
      break;
    }
    case GenKind::powerlaw: {
      const double inv = 1.0 / (spec.param - 1.0);
      for (index_t r = 0; r < m; ++r) {
        double u = uniform01(rng);
        if (u <= 0.0) u = 0x1.0p-53;
        const double raw = std::floor(std::pow(u, -inv));
        length[r] = static_cast<index_t>(
            std::min(raw, static_cast<double>(n)));
      }
      break;
    }
    case GenKind::emptyrows: {
      const auto empty = static_cast<index_t>(std::llround(spec.param * m));
      const index_t cap = std::min<index_t>(n, 16);
      for (index_t r = 0; r < m; ++r) {
        length[r] = cap > 0 ? static_cast<index_t>(1 + uniform_below(rng, cap)) : 0;
      }
      // Partial Fisher-Yates picks the empty positions.
      std::vector<index_t> rows(static_cast<std::size_t>(m));
      for (index_t r = 0; r < m; ++r) rows[r] = r;
      for (index_t k = 0; k < empty; ++k) {
        const auto pick = static_cast<index_t>(
            k + uniform_below(rng, static_cast<std::uint64_t>(m - k)));
        std::swap(rows[k], rows[pick]);
        length[rows[k]] = 0;
      }
      break;
    }
  }

  CsrMatrix<double> a;
  a.num_rows = m;
  a.num_cols = n;
  a.row_ptr.assign(static_cast<std::size_t>(m) + 1, 0);
  for (index_t r = 0; r < m; ++r) a.row_ptr[r + 1] = a.row_ptr[r] + length[r];
  a.col_idx.reserve(a.row_ptr[m]);
  a.values.reserve(a.row_ptr[m]);

  for (index_t r = 0; r < m; ++r) {
    if (length[r] == 0) continue;
    if (length[r] == n) {
      for (index_t c = 0; c < n; ++c) a.col_idx.push_back(c);
    } else {
      const auto cols = sample_columns(rng, n, length[r]);
      a.col_idx.insert(a.col_idx.end(), cols.begin(), cols.end());
    }
    for (index_t k = 0; k < length[r]; ++k) a.values.push_back(uniform01(rng));
  }
  return a;
}

GenSpec parse_genspec(const std::string& text) {
  const auto first = text.find(':');
  const auto last = text.rfind(':');
  if (first == std::string::npos || last == first) {
    throw std::invalid_argument(
        "generator spec must look like kind:m=..,n=..[,param=..]:seed");
  }
  GenSpec spec;
  spec.kind = gen_kind_from_string(text.substr(0, first));

  try {
    spec.seed = std::stoull(text.substr(last + 1));
  } catch (const std::exception&) {
    throw std::invalid_argument("generator seed must be an unsigned integer");
  }

  bool have_m = false, have_n = false;
  std::string params = text.substr(first + 1, last - first - 1);
  std::size_t pos = 0;
  while (pos < params.size()) {
    auto end = params.find(',', pos);
    if (end == std::string::npos) end = params.size();
    const std::string item = params.substr(pos, end - pos);
    pos = end + 1;
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("generator parameter '" + item + "' is not key=value");
    }
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    const bool is_param = key == "param" || key == "density" || key == "avgnnz" ||
                          key == "exponent" || key == "fraction";
    if (key != "m" && key != "n" && !is_param) {
      throw std::invalid_argument("unknown generator parameter '" + key + "'");
    }
    try {
      if (key == "m") {
        spec.num_rows = static_cast<index_t>(std::stol(value));
        have_m = true;
      } else if (key == "n") {
        spec.num_cols = static_cast<index_t>(std::stol(value));
        have_n = true;
      } else {
        spec.param = std::stod(value);
      }
    } catch (const std::exception&) {
      throw std::invalid_argument("generator parameter '" + key +
                                  "' has a malformed value '" + value + "'");
    }
  }
  if (!have_m || !have_n) {
    throw std::invalid_argument("generator spec must set m and n");
  }
  return spec;
}

std::string to_string(const GenSpec& spec) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%s:m=%d,n=%d,param=%g:%llu", to_string(spec.kind),
                static_cast<int>(spec.num_rows), static_cast<int>(spec.num_cols),
                spec.param, static_cast<unsigned long long>(spec.seed));
  return buf;
}

}  // namespace specspmv
