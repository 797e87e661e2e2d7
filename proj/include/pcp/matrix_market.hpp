#pragma once

#include <string>

#include "pcp/dense_matrix.hpp"
#include "pcp/vec.hpp"

namespace pcp {

// Matrix Market I/O covering the subset the tools need:
//   - coordinate real general/symmetric
//   - array      real general/symmetric
// Integer fields are accepted and read as doubles. Pattern/complex banners and
// malformed input raise ParseError. Writers emit 17 significant digits so
// write -> read round-trips are exact.

DenseMatrix read_matrix_market(const std::string& path);

void write_matrix_market_array(const std::string& path, const DenseMatrix& m);
// Coordinate format; entries exactly equal to zero are dropped.
void write_matrix_market_coordinate(const std::string& path, const DenseMatrix& m);

// Vectors are stored as d x 1 (or 1 x d) matrices.
DenseVector read_vector_market(const std::string& path);
void write_vector_market(const std::string& path, const DenseVector& v);

}  // namespace pcp
