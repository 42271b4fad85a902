#ifndef CVQSS_SCHEME_IO_HPP
#define CVQSS_SCHEME_IO_HPP

#include "cvqss/scheme.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace cvqss {

// Scheme files are line oriented: `key = value` pairs, `#` comments, blank
// lines ignored. Keys: k, n (required), L (rows of k reals separated by
// `;`, defaults to default_L(k)), discarded_shares (share indices,
// defaults to the highest 2k-1-n), r, secret (two reals), r_grid (list of
// reals). Unknown keys are rejected.

struct SchemeFile {
  ThresholdSchemeSpec spec;
  double r = 1.0;
  Complex secret{0.0, 0.0};
  std::vector<double> r_grid;
};

struct SchemeParseError : std::runtime_error {
  SchemeParseError(int line, int column, const std::string& what);
  int line;
  int column;
};

SchemeFile parse_scheme_file(std::istream& in);
SchemeFile parse_scheme_file(const std::string& text);
SchemeFile load_scheme_file(const std::string& path);

std::string serialize_scheme_file(const SchemeFile& file);

/// Rectangular table of doubles written as comma-separated text with 12
/// significant digits; deterministic byte-for-byte.
struct ResultTable {
  std::vector<std::string> headers;
  std::vector<std::vector<double>> rows;
};

std::string to_csv(const ResultTable& table);

/// Formats one double with 12 significant digits (the precision used by
/// every emitted artifact).
std::string format_sig12(double value);

/// Writes via a temporary file and rename, so failures leave no partial
/// output behind.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace cvqss

#endif  // CVQSS_SCHEME_IO_HPP
