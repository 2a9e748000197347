#pragma once

#include "monge/types.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace monge {

// Matrix file format used across the toolkit: plain-text CSV, no header, one
// matrix row per line, decimal float entries, LF line endings. Dimensions are
// inferred from the file; ragged rows are a parse error.

inline MatrixXd readCsvMatrix(std::istream& in, const std::string& name = "<stream>") {
  std::vector<std::vector<double>> rows;
  std::string line;
  Index cols = -1;
  Index lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() && in.peek() == std::char_traits<char>::eof()) break;  // trailing newline
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      size_t pos = 0;
      double v = 0;
      try {
        v = std::stod(cell, &pos);
      } catch (const std::exception&) {
        throw std::invalid_argument(name + ":" + std::to_string(lineNo) + ": not a number: '" + cell + "'");
      }
      while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos]))) ++pos;
      if (pos != cell.size()) {
        throw std::invalid_argument(name + ":" + std::to_string(lineNo) + ": trailing garbage in '" + cell + "'");
      }
      if (!std::isfinite(v)) {
        throw std::invalid_argument(name + ":" + std::to_string(lineNo) + ": non-finite entry");
      }
      row.push_back(v);
    }
    if (row.empty()) {
      throw std::invalid_argument(name + ":" + std::to_string(lineNo) + ": empty row");
    }
    if (cols < 0) {
      cols = static_cast<Index>(row.size());
    } else if (static_cast<Index>(row.size()) != cols) {
      throw std::invalid_argument(name + ":" + std::to_string(lineNo) + ": ragged row (expected " +
                                  std::to_string(cols) + " entries, found " + std::to_string(row.size()) + ")");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument(name + ": empty matrix file");
  MatrixXd m(static_cast<Index>(rows.size()), cols);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
  }
  return m;
}

inline MatrixXd readCsvMatrixFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open matrix file: " + path);
  return readCsvMatrix(in, path);
}

template <typename Derived>
void writeCsvMatrix(std::ostream& out, const Eigen::MatrixBase<Derived>& m) {
  char buf[64];
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      // %.17g round-trips doubles exactly
      std::snprintf(buf, sizeof(buf), "%.17g", static_cast<double>(m(i, j)));
      out << buf;
      if (j + 1 < m.cols()) out << ',';
    }
    out << '\n';
  }
}

template <typename Derived>
void writeCsvMatrixFile(const std::string& path, const Eigen::MatrixBase<Derived>& m) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open output file: " + path);
  writeCsvMatrix(out, m);
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace monge
