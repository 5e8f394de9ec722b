#include "metric_repair/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <vector>

namespace metric_repair::io {

ParseError::ParseError(const std::string& source, int line, const std::string& what)
    : std::runtime_error(source + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " +
                         what),
      line_(line) {}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

bool parse_double(std::string_view field, double& v) {
  if (field.empty()) return false;
  if (field.front() == '+') field.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  return ec == std::errc() && ptr == field.data() + field.size() && std::isfinite(v);
}

bool parse_index(std::string_view field, int& v) {
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  return !field.empty() && ec == std::errc() && ptr == field.data() + field.size();
}

bool blank(std::string_view line) { return trim(line).empty(); }

// Iterates the "i,j,value" rows of a triple file.
template <class Fn>
void read_triples(std::istream& in, int n, const std::string& source, Fn&& fn) {
  std::string line;
  int lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    const auto fields = split(line);
    if (!header) {
      if (fields.size() != 3 || fields[0] != "i" || fields[1] != "j" || fields[2] != "value") {
        throw ParseError(source, lineno, "expected header 'i,j,value'");
      }
      header = true;
      continue;
    }
    if (fields.size() != 3) throw ParseError(source, lineno, "expected 3 fields");
    int i = 0, j = 0;
    double v = 0.0;
    if (!parse_index(fields[0], i) || !parse_index(fields[1], j)) {
      throw ParseError(source, lineno, "bad index");
    }
    if (!parse_double(fields[2], v)) throw ParseError(source, lineno, "bad value");
    if (i < 1 || j > n || i >= j) {
      throw ParseError(source, lineno,
                       "indices must satisfy 1 <= i < j <= " + std::to_string(n));
    }
    fn(lineno, i - 1, j - 1, v);
  }
  if (!header) throw ParseError(source, lineno, "missing header 'i,j,value'");
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  return in;
}

template <class Fn>
void write_file(const std::filesystem::path& path, Fn&& fn) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  fn(out);
  out.flush();
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

}  // namespace

DistanceMatrix read_matrix(std::istream& in, const std::string& source) {
  std::vector<std::vector<double>> rows;
  std::vector<int> line_of_row;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    std::vector<double> row;
    const auto fields = split(line);
    for (std::size_t c = 0; c < fields.size(); ++c) {
      double v = 0.0;
      if (!parse_double(fields[c], v)) {
        throw ParseError(source, lineno,
                         "column " + std::to_string(c + 1) + ": not a number '" +
                             std::string(fields[c]) + "'");
      }
      row.push_back(v);
    }
    rows.push_back(std::move(row));
    line_of_row.push_back(lineno);
  }
  if (rows.empty()) throw ParseError(source, lineno, "empty matrix");
  const std::size_t n = rows.size();
  for (std::size_t r = 0; r < n; ++r) {
    if (rows[r].size() != n) {
      throw ParseError(source, line_of_row[r],
                       "expected " + std::to_string(n) + " columns, found " +
                           std::to_string(rows[r].size()));
    }
  }
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const double v = rows[r][c];
      std::string problem;
      if (r == c && v != 0.0) problem = "nonzero diagonal entry";
      else if (v < 0.0) problem = "negative entry";
      else if (v != rows[c][r]) problem = "not symmetric with row " + std::to_string(c + 1);
      if (!problem.empty()) {
        throw ParseError(source, line_of_row[r], "column " + std::to_string(c + 1) + ": " + problem);
      }
    }
  }
  return DistanceMatrix::from_rows(rows);
}

void write_matrix(std::ostream& out, const DistanceMatrix& d) {
  const int n = d.size();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j > 0) out << ',';
      out << format_number(d(i, j));
    }
    out << '\n';
  }
}

Perturbation read_perturbation(std::istream& in, int n, const std::string& source) {
  Perturbation p(n);
  SymmetricArray<std::uint8_t> seen(n, 0);
  read_triples(in, n, source, [&](int lineno, int i, int j, double v) {
    if (seen(i, j)) throw ParseError(source, lineno, "duplicate pair");
    seen.set(i, j, 1);
    p.set(i, j, v);
  });
  return p;
}

void write_perturbation(std::ostream& out, const Perturbation& p) {
  out << "i,j,value\n";
  for (const auto& [pair, v] : p.entries()) {
    out << pair.i + 1 << ',' << pair.j + 1 << ',' << format_number(v) << '\n';
  }
}

OracleMask read_oracle(std::istream& in, int n, const std::string& source) {
  OracleMask q(n);
  read_triples(in, n, source, [&](int lineno, int i, int j, double v) {
    if (v != 0.0 && v != 1.0) throw ParseError(source, lineno, "oracle values must be 0 or 1");
    if (v == 1.0) q.mark(i, j);
  });
  return q;
}

void write_oracle(std::ostream& out, const OracleMask& q) {
  out << "i,j,value\n";
  for (const Pair& p : q.marked_pairs()) out << p.i + 1 << ',' << p.j + 1 << ",1\n";
}

DistanceMatrix load_matrix(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_matrix(in, path.string());
}

void save_matrix(const std::filesystem::path& path, const DistanceMatrix& d) {
  write_file(path, [&](std::ostream& out) { write_matrix(out, d); });
}

Perturbation load_perturbation(const std::filesystem::path& path, int n) {
  auto in = open_in(path);
  return read_perturbation(in, n, path.string());
}

void save_perturbation(const std::filesystem::path& path, const Perturbation& p) {
  write_file(path, [&](std::ostream& out) { write_perturbation(out, p); });
}

OracleMask load_oracle(const std::filesystem::path& path, int n) {
  auto in = open_in(path);
  return read_oracle(in, n, path.string());
}

void save_oracle(const std::filesystem::path& path, const OracleMask& q) {
  write_file(path, [&](std::ostream& out) { write_oracle(out, q); });
}

}  // namespace metric_repair::io
