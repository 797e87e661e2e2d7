#include "pcp/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "pcp/errors.hpp"

namespace pcp {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

void fail(const std::string& path, const std::string& msg) {
  throw ParseError("matrix market '" + path + "': " + msg);
}

// Reads the next line that is neither empty nor a % comment.
bool next_data_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    std::size_t pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos) continue;
    if (line[pos] == '%') continue;
    return true;
  }
  return false;
}

}  // namespace

DenseMatrix read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(path, "cannot open file");

  std::string banner;
  if (!std::getline(in, banner)) fail(path, "empty file");
  std::istringstream bs(banner);
  std::string head, object, format, field, symmetry;
  bs >> head >> object >> format >> field >> symmetry;
  if (lower(head) != "%%matrixmarket") fail(path, "missing %%MatrixMarket banner");
  if (lower(object) != "matrix") fail(path, "unsupported object '" + object + "'");
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (field != "real" && field != "integer") fail(path, "unsupported field '" + field + "'");
  if (symmetry != "general" && symmetry != "symmetric") {
    fail(path, "unsupported symmetry '" + symmetry + "'");
  }
  const bool symmetric = symmetry == "symmetric";

  std::string line;
  if (!next_data_line(in, line)) fail(path, "missing size line");
  std::istringstream sz(line);

  if (format == "coordinate") {
    long long rows = 0, cols = 0, nnz = 0;
    if (!(sz >> rows >> cols >> nnz) || rows <= 0 || cols <= 0 || nnz < 0) {
      fail(path, "bad coordinate size line");
    }
    if (symmetric && rows != cols) fail(path, "symmetric matrix must be square");
    DenseMatrix m(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
    for (long long k = 0; k < nnz; ++k) {
      if (!next_data_line(in, line)) fail(path, "truncated entry list");
      std::istringstream es(line);
      long long i = 0, j = 0;
      double v = 0.0;
      if (!(es >> i >> j >> v)) fail(path, "bad coordinate entry");
      if (i < 1 || i > rows || j < 1 || j > cols) fail(path, "coordinate index out of range");
      if (!std::isfinite(v)) fail(path, "non-finite entry");
      m.at(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1)) = v;
      if (symmetric && i != j) {
        m.at(static_cast<std::size_t>(j - 1), static_cast<std::size_t>(i - 1)) = v;
      }
    }
    return m;
  }

  if (format == "array") {
    long long rows = 0, cols = 0;
    if (!(sz >> rows >> cols) || rows <= 0 || cols <= 0) fail(path, "bad array size line");
    if (symmetric && rows != cols) fail(path, "symmetric matrix must be square");
    DenseMatrix m(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
    // array data is column-major; symmetric arrays store the lower triangle
    for (long long j = 0; j < cols; ++j) {
      long long i0 = symmetric ? j : 0;
      for (long long i = i0; i < rows; ++i) {
        if (!next_data_line(in, line)) fail(path, "truncated array data");
        std::istringstream es(line);
        double v = 0.0;
        if (!(es >> v)) fail(path, "bad array value");
        if (!std::isfinite(v)) fail(path, "non-finite entry");
        m.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = v;
        if (symmetric && i != j) {
          m.at(static_cast<std::size_t>(j), static_cast<std::size_t>(i)) = v;
        }
      }
    }
    return m;
  }

  fail(path, "unsupported format '" + format + "'");
  return {};
}

void write_matrix_market_array(const std::string& path, const DenseMatrix& m) {
  check_finite(m.data, "write_matrix_market_array");
  std::ofstream out(path);
  if (!out) throw ParseError("matrix market '" + path + "': cannot open for writing");
  out << "%%MatrixMarket matrix array real general\n";
  out << m.rows << " " << m.cols << "\n";
  char buf[64];
  for (std::size_t j = 0; j < m.cols; ++j) {
    for (std::size_t i = 0; i < m.rows; ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", m.at(i, j));
      out << buf << "\n";
    }
  }
  if (!out) throw ParseError("matrix market '" + path + "': write failed");
}

void write_matrix_market_coordinate(const std::string& path, const DenseMatrix& m) {
  check_finite(m.data, "write_matrix_market_coordinate");
  std::ofstream out(path);
  if (!out) throw ParseError("matrix market '" + path + "': cannot open for writing");
  std::size_t nnz = 0;
  for (double v : m.data) {
    if (v != 0.0) ++nnz;
  }
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.rows << " " << m.cols << " " << nnz << "\n";
  char buf[64];
  for (std::size_t i = 0; i < m.rows; ++i) {
    for (std::size_t j = 0; j < m.cols; ++j) {
      double v = m.at(i, j);
      if (v == 0.0) continue;
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      out << (i + 1) << " " << (j + 1) << " " << buf << "\n";
    }
  }
  if (!out) throw ParseError("matrix market '" + path + "': write failed");
}

DenseVector read_vector_market(const std::string& path) {
  DenseMatrix m = read_matrix_market(path);
  if (m.rows != 1 && m.cols != 1) {
    throw ParseError("matrix market '" + path + "': expected a vector (one row or one column)");
  }
  return m.data;  // row-major storage of an n x 1 or 1 x n matrix is the vector itself
}

void write_vector_market(const std::string& path, const DenseVector& v) {
  DenseMatrix m(v.size(), 1);
  m.data = v;
  write_matrix_market_array(path, m);
}

}  // namespace pcp
