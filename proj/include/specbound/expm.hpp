#pragma once
#include "specbound/dense_kernels.hpp"

namespace specbound::core {

// Matrix exponential: scaling-and-squaring with the degree-13 Pade approximant.
DenseMatrix expm(const DenseMatrix& m);

}  // namespace specbound::core
