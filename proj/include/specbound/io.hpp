#pragma once
#include <string>

#include "specbound/linear_operator.hpp"

namespace specbound::core {

enum class MatrixFormat { csv, spbd };

// SPBD binary: magic "SPBD", u32 version = 1, u64 rows, u64 cols,
// then rows*cols little-endian float64, row-major. Bit-exact round trips.
DenseMatrix load_matrix(const std::string& path, MatrixFormat format);
void save_matrix(const DenseMatrix& m, const std::string& path, MatrixFormat format);

}  // namespace specbound::core
