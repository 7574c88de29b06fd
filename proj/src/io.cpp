#include "eqcd/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace eqcd {

std::string format_double(double v) {
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  return f;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open for reading: " + path);
  return f;
}

double parse_double(const std::string& s, const std::string& path) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("bad numeric field '" + s + "' in " + path);
  }
}

}  // namespace

void write_vector_file(const std::string& path, std::span<const double> v) {
  auto f = open_out(path);
  for (double x : v) f << format_double(x) << '\n';
}

std::vector<double> read_vector_file(const std::string& path) {
  auto f = open_in(path);
  std::vector<double> v;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    v.push_back(parse_double(line, path));
  }
  return v;
}

void write_matrix_csv(const std::string& path, std::span<const double> row_major, int rows,
                      int cols) {
  if (row_major.size() != static_cast<size_t>(rows) * cols)
    throw std::invalid_argument("write_matrix_csv: size mismatch");
  auto f = open_out(path);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (c) f << ',';
      f << format_double(row_major[static_cast<size_t>(r) * cols + c]);
    }
    f << '\n';
  }
}

MatrixData read_matrix_csv(const std::string& path) {
  auto f = open_in(path);
  MatrixData m;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    int cols = 0;
    while (std::getline(ss, cell, ',')) {
      m.values.push_back(parse_double(cell, path));
      ++cols;
    }
    if (m.rows == 0)
      m.cols = cols;
    else if (cols != m.cols)
      throw std::runtime_error("ragged matrix row in " + path);
    ++m.rows;
  }
  return m;
}

void write_trace_csv(const std::string& path, const Trace& trace,
                     std::span<const int> interior) {
  if (!interior.empty() && interior.size() != trace.size())
    throw std::invalid_argument("write_trace_csv: interior column length mismatch");
  auto f = open_out(path);
  f << "iter,fval,gap,optimality,rule,support_size,i,j,delta,elapsed_ns";
  if (!interior.empty()) f << ",interior";
  f << '\n';
  for (size_t r = 0; r < trace.size(); ++r) {
    const TraceRecord& t = trace[r];
    f << t.iter << ',' << format_double(t.fval) << ',';
    if (t.gap) f << format_double(*t.gap);
    f << ',' << format_double(t.optimality) << ',' << t.rule << ',' << t.support_size << ',';
    if (t.pair) f << t.pair->first;
    f << ',';
    if (t.pair) f << t.pair->second;
    f << ',';
    if (t.delta) f << format_double(*t.delta);
    f << ',' << t.elapsed_ns;
    if (!interior.empty()) f << ',' << interior[r];
    f << '\n';
  }
}

Trace read_trace_csv(const std::string& path) {
  auto f = open_in(path);
  std::string line;
  if (!std::getline(f, line) || line.rfind("iter,fval,gap,optimality", 0) != 0)
    throw std::runtime_error("missing trace header in " + path);
  Trace trace;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    if (cells.size() < 10) throw std::runtime_error("short trace row in " + path);
    TraceRecord t;
    t.iter = std::stoll(cells[0]);
    t.fval = parse_double(cells[1], path);
    if (!cells[2].empty()) t.gap = parse_double(cells[2], path);
    t.optimality = parse_double(cells[3], path);
    t.rule = cells[4];
    t.support_size = std::stoi(cells[5]);
    if (!cells[6].empty() && !cells[7].empty())
      t.pair = std::make_pair(std::stoi(cells[6]), std::stoi(cells[7]));
    if (!cells[8].empty()) t.delta = parse_double(cells[8], path);
    t.elapsed_ns = std::stoll(cells[9]);
    trace.push_back(std::move(t));
  }
  return trace;
}

}  // namespace eqcd
