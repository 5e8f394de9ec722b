#pragma once

// File formats.
//
// Matrix: n lines of n comma-separated numbers, written with 17 significant
// digits. Symmetry and the zero diagonal must hold exactly.
// Perturbation / oracle: a header "i,j,value" followed by 1-indexed rows with
// i < j. Oracle files list only pairs with value 1.

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "metric_repair/core.hpp"

namespace metric_repair::io {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

/// %.17g
std::string format_number(double v);

DistanceMatrix read_matrix(std::istream& in, const std::string& source = "<input>");
void write_matrix(std::ostream& out, const DistanceMatrix& d);

Perturbation read_perturbation(std::istream& in, int n, const std::string& source = "<input>");
void write_perturbation(std::ostream& out, const Perturbation& p);

OracleMask read_oracle(std::istream& in, int n, const std::string& source = "<input>");
void write_oracle(std::ostream& out, const OracleMask& q);

// File wrappers. Reading a missing file throws ParseError at line 0; write
// failures throw std::runtime_error.
DistanceMatrix load_matrix(const std::filesystem::path& path);
void save_matrix(const std::filesystem::path& path, const DistanceMatrix& d);
Perturbation load_perturbation(const std::filesystem::path& path, int n);
void save_perturbation(const std::filesystem::path& path, const Perturbation& p);
OracleMask load_oracle(const std::filesystem::path& path, int n);
void save_oracle(const std::filesystem::path& path, const OracleMask& q);

}  // namespace metric_repair::io
