#include "cvqss/scheme_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace cvqss {

namespace {

std::string strip_comment(const std::string& line) {
  const auto hash = line.find('#');
  return hash == std::string::npos ? line : line.substr(0, hash);
}

bool blank(const std::string& s) {
  return s.find_first_not_of(" \t\r") == std::string::npos;
}

struct KeyValue {
  std::string key;
  std::string value;
  int value_column;
};

}  // namespace

SchemeParseError::SchemeParseError(int line_in, int column_in, const std::string& what)
    : std::runtime_error("line " + std::to_string(line_in) + ", column " +
                         std::to_string(column_in) + ": " + what),
      line(line_in),
      column(column_in) {}

SchemeFile parse_scheme_file(std::istream& in) {
  SchemeFile file;
  bool have_k = false, have_n = false, have_l = false, have_discards = false;
  std::set<std::string> seen;
  std::string raw;
  int line_no = 0;

  auto parse_reals = [](const std::string& text, int line, int column) {
    std::vector<double> values;
    std::istringstream tokens(text);
    std::string tok;
    while (tokens >> tok) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw SchemeParseError(line, column, "expected a real number, got '" + tok + "'");
      }
    }
    return values;
  };

  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = strip_comment(raw);
    if (blank(line)) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw SchemeParseError(line_no, 1, "expected 'key = value'");
    std::string key = line.substr(0, eq);
    key.erase(0, key.find_first_not_of(" \t"));
    key.erase(key.find_last_not_of(" \t") + 1);
    const std::string value = line.substr(eq + 1);
    const int value_col = static_cast<int>(eq) + 2;
    if (key.empty()) throw SchemeParseError(line_no, 1, "missing key");
    if (!seen.insert(key).second)
      throw SchemeParseError(line_no, 1, "duplicate key '" + key + "'");

    if (key == "k" || key == "n") {
      const std::vector<double> v = parse_reals(value, line_no, value_col);
      if (v.size() != 1 || v[0] != std::floor(v[0]) || v[0] < 1)
        throw SchemeParseError(line_no, value_col, "'" + key + "' must be a positive integer");
      (key == "k" ? file.spec.k : file.spec.n) = static_cast<int>(v[0]);
      (key == "k" ? have_k : have_n) = true;
    } else if (key == "L") {
      std::vector<std::vector<double>> rows;
      std::stringstream row_stream(value);
      std::string row_text;
      while (std::getline(row_stream, row_text, ';'))
        rows.push_back(parse_reals(row_text, line_no, value_col));
      if (!rows.empty() && rows.back().empty()) rows.pop_back();
      if (rows.empty()) throw SchemeParseError(line_no, value_col, "'L' has no rows");
      Mat l(rows.size(), rows[0].size());
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows[0].size())
          throw SchemeParseError(line_no, value_col, "'L' rows have unequal lengths");
        for (std::size_t j = 0; j < rows[i].size(); ++j) l(i, j) = rows[i][j];
      }
      file.spec.L = std::move(l);
      have_l = true;
    } else if (key == "discarded_shares") {
      for (double v : parse_reals(value, line_no, value_col)) {
        if (v != std::floor(v) || v < 1)
          throw SchemeParseError(line_no, value_col,
                                 "'discarded_shares' entries must be positive integers");
        file.spec.discarded_shares.push_back(static_cast<int>(v));
      }
      have_discards = true;
    } else if (key == "r") {
      const std::vector<double> v = parse_reals(value, line_no, value_col);
      if (v.size() != 1) throw SchemeParseError(line_no, value_col, "'r' must be one real");
      file.r = v[0];
    } else if (key == "secret") {
      const std::vector<double> v = parse_reals(value, line_no, value_col);
      if (v.size() != 2)
        throw SchemeParseError(line_no, value_col, "'secret' must be two reals (re im)");
      file.secret = Complex(v[0], v[1]);
    } else if (key == "r_grid") {
      file.r_grid = parse_reals(value, line_no, value_col);
    } else {
      throw SchemeParseError(line_no, 1, "unknown key '" + key + "'");
    }
  }

  if (!have_k) throw SchemeParseError(line_no + 1, 1, "missing required key 'k'");
  if (!have_n) throw SchemeParseError(line_no + 1, 1, "missing required key 'n'");
  if (!have_l) file.spec.L = default_L(file.spec.k);
  if (static_cast<int>(file.spec.L.rows()) != 2 * file.spec.k - 1 ||
      static_cast<int>(file.spec.L.cols()) != file.spec.k)
    throw SchemeParseError(line_no + 1, 1, "'L' must be (2k-1) x k");
  if (!have_discards) {
    for (int share = file.spec.n + 1; share <= 2 * file.spec.k - 1; ++share)
      file.spec.discarded_shares.push_back(share);
  }
  return file;
}

SchemeFile parse_scheme_file(const std::string& text) {
  std::istringstream in(text);
  return parse_scheme_file(in);
}

SchemeFile load_scheme_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scheme file: " + path);
  return parse_scheme_file(in);
}

std::string serialize_scheme_file(const SchemeFile& file) {
  std::string out;
  out += "k = " + std::to_string(file.spec.k) + "\n";
  out += "n = " + std::to_string(file.spec.n) + "\n";
  out += "L =";
  for (int i = 0; i < file.spec.L.rows(); ++i) {
    if (i > 0) out += " ;";
    for (int j = 0; j < file.spec.L.cols(); ++j)
      out += " " + format_sig12(file.spec.L(i, j));
  }
  out += "\n";
  if (!file.spec.discarded_shares.empty()) {
    out += "discarded_shares =";
    for (int share : file.spec.discarded_shares) out += " " + std::to_string(share);
    out += "\n";
  }
  out += "r = " + format_sig12(file.r) + "\n";
  out += "secret = " + format_sig12(file.secret.real()) + " " +
         format_sig12(file.secret.imag()) + "\n";
  if (!file.r_grid.empty()) {
    out += "r_grid =";
    for (double r : file.r_grid) out += " " + format_sig12(r);
    out += "\n";
  }
  return out;
}

std::string format_sig12(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

std::string to_csv(const ResultTable& table) {
  std::string out;
  for (std::size_t i = 0; i < table.headers.size(); ++i) {
    if (i > 0) out += ",";
    out += table.headers[i];
  }
  out += "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += ",";
      out += format_sig12(row[i]);
    }
    out += "\n";
  }
  return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open output file: " + tmp);
    out << content;
    if (!out.flush()) throw std::runtime_error("failed writing output file: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace cvqss
