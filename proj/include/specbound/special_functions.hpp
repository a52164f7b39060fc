#pragma once
#include "specbound/quadrature.hpp"

namespace specbound::special {

// Phi(x), abs. error <= 1e-14
double std_normal_cdf(double x);

// regularized lower incomplete gamma P(a, x); the chi-squared workhorse
double reg_lower_gamma(double a, double x);

// chi^2_k distribution function
double chi2_cdf(int k, double t);

// law of xi^2 + alpha * eta^2 for independent standard normals
double wchi2_cdf(double alpha, double t);
double wchi2_pdf(double alpha, double t);

}  // namespace specbound::special
