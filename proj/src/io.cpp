#include "sparseflux/io.hpp"

#include "sparseflux/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace sparseflux {

namespace {

[[noreturn]] void parse_error(const std::string& source, long line, const std::string& what) {
  std::ostringstream os;
  os << source << ":" << line << ": " << what;
  throw Error(ErrorKind::Parse, os.str());
}

std::string lower_case(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return std::tolower(ch); });
  return s;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_double(const std::string& text, double& out) {
  const std::string t = lower_case(trim(text));
  if (t == "inf" || t == "+inf" || t == "infinity" || t == "+infinity") {
    out = std::numeric_limits<double>::infinity();
    return true;
  }
  if (t == "-inf" || t == "-infinity") {
    out = -std::numeric_limits<double>::infinity();
    return true;
  }
  if (t.empty()) return false;
  const char* begin = t.data();
  const char* end = t.data() + t.size();
  if (*begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end && !std::isnan(out);
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot open " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Config, "cannot write " + path.string());
  return out;
}

}  // namespace

StoichiometricMatrix read_matrix_market(std::istream& in, const std::string& source) {
  std::string line;
  long lineno = 0;
  if (!std::getline(in, line)) parse_error(source, 1, "empty MatrixMarket file");
  ++lineno;
  {
    std::istringstream header(lower_case(line));
    std::string banner, object, format, field, symmetry;
    header >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%matrixmarket" || object != "matrix")
      parse_error(source, lineno, "missing %%MatrixMarket matrix banner");
    if (format != "coordinate") parse_error(source, lineno, "only coordinate format is supported");
    if (field != "real" && field != "integer") parse_error(source, lineno, "only real or integer fields are supported");
    if (symmetry != "general") parse_error(source, lineno, "only general symmetry is supported");
  }

  long rows = -1, cols = -1, nnz = -1;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '%') continue;
    std::istringstream size(t);
    std::string extra;
    if (!(size >> rows >> cols >> nnz) || (size >> extra) || rows < 0 || cols < 0 || nnz < 0)
      parse_error(source, lineno, "bad size line, expected 'rows cols nonzeros'");
    break;
  }
  if (nnz < 0) parse_error(source, lineno, "missing size line");

  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(nnz));
  while (static_cast<long>(entries.size()) < nnz && std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '%') continue;
    std::istringstream entry(t);
    long r = 0, c = 0;
    std::string value_text, extra;
    double value = 0.0;
    if (!(entry >> r >> c >> value_text) || (entry >> extra) || !parse_double(value_text, value) ||
        !std::isfinite(value))
      parse_error(source, lineno, "bad entry, expected 'row col value'");
    if (r < 1 || r > rows || c < 1 || c > cols) {
      std::ostringstream os;
      os << "entry (" << r << ", " << c << ", " << value_text << ") outside the declared " << rows << " x " << cols
         << " shape";
      parse_error(source, lineno, os.str());
    }
    entries.push_back({r - 1, c - 1, value});
  }
  if (static_cast<long>(entries.size()) != nnz) {
    std::ostringstream os;
    os << "expected " << nnz << " entries, found " << entries.size();
    parse_error(source, lineno, os.str());
  }
  return StoichiometricMatrix(rows, cols, entries);
}

StoichiometricMatrix read_matrix_market(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_matrix_market(in, path.string());
}

void write_matrix_market(std::ostream& out, const StoichiometricMatrix& S) {
  const auto trips = S.triplets();
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << S.rows() << " " << S.cols() << " " << trips.size() << "\n";
  out << std::setprecision(17);
  for (const auto& t : trips) out << t.row + 1 << " " << t.col + 1 << " " << t.value << "\n";
}

void write_matrix_market(const std::filesystem::path& path, const StoichiometricMatrix& S) {
  auto out = open_output(path);
  write_matrix_market(out, S);
}

Matrix read_csv_matrix(std::istream& in, const std::string& source) {
  std::vector<std::vector<double>> rows;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::vector<double> row;
    std::stringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) {
      double value = 0.0;
      if (!parse_double(field, value)) parse_error(source, lineno, "not a number: '" + trim(field) + "'");
      row.push_back(value);
    }
    if (!line.empty() && line.back() == ',') parse_error(source, lineno, "trailing comma");
    if (!rows.empty() && row.size() != rows.front().size()) {
      std::ostringstream os;
      os << "expected " << rows.front().size() << " fields, found " << row.size();
      parse_error(source, lineno, os.str());
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) parse_error(source, lineno, "empty CSV file");
  Matrix out(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) out(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
  return out;
}

Matrix read_csv_matrix(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_csv_matrix(in, path.string());
}

void write_csv_matrix(std::ostream& out, const Matrix& M) {
  out << std::setprecision(17);
  for (Index i = 0; i < M.rows(); ++i) {
    for (Index j = 0; j < M.cols(); ++j) {
      if (j) out << ",";
      const double x = M(i, j);
      if (std::isinf(x)) out << (x > 0 ? "inf" : "-inf");
      else out << x;
    }
    out << "\n";
  }
}

void write_csv_matrix(const std::filesystem::path& path, const Matrix& M) {
  auto out = open_output(path);
  write_csv_matrix(out, M);
}

BoundsSet read_bounds(const std::filesystem::path& lower, const std::filesystem::path& upper) {
  Matrix lo = read_csv_matrix(lower);
  Matrix hi = read_csv_matrix(upper);
  if (lo.rows() != hi.rows() || lo.cols() != hi.cols()) {
    std::ostringstream os;
    os << "bound files disagree: " << lower.string() << " is " << lo.rows() << " x " << lo.cols() << ", "
       << upper.string() << " is " << hi.rows() << " x " << hi.cols();
    throw Error(ErrorKind::Parse, os.str());
  }
  return BoundsSet(std::move(lo), std::move(hi));
}

}  // namespace sparseflux
