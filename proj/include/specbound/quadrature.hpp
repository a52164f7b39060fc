#pragma once
#include <functional>

#include "specbound/errors.hpp"

namespace specbound::special {

// Adaptive Gauss-Kronrod 15(7) to an absolute tolerance. Endpoint
// singularities are the caller's job (substitute them away first);
// non-convergence throws quadrature_error rather than returning a guess.
double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol);

}  // namespace specbound::special
