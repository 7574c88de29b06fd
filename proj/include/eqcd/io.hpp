#pragma once

#include <span>
#include <string>
#include <vector>

#include "eqcd/types.hpp"

namespace eqcd {

/// Shortest representation that parses back to the same double (17
/// significant digits as the upper bound).
std::string format_double(double v);

/// Vector file: one decimal value per line.
void write_vector_file(const std::string& path, std::span<const double> v);
std::vector<double> read_vector_file(const std::string& path);

struct MatrixData {
  std::vector<double> values;  // row-major
  int rows = 0;
  int cols = 0;
};

/// Matrix file: CSV, row-major, no header.
void write_matrix_csv(const std::string& path, std::span<const double> row_major, int rows,
                      int cols);
MatrixData read_matrix_csv(const std::string& path);

/// Trace CSV columns: iter,fval,gap,optimality,rule,support_size,i,j,delta,
/// elapsed_ns. Header row always present; optional fields serialize as empty
/// cells. interior, when given (one entry per record), appends an
/// interior-variable-count column.
void write_trace_csv(const std::string& path, const Trace& trace,
                     std::span<const int> interior = {});
Trace read_trace_csv(const std::string& path);

}  // namespace eqcd
