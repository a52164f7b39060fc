#pragma once
#include <string>
#include <vector>

#include "specbound/estimators.hpp"
#include "specbound/linear_operator.hpp"

namespace specbound::cal {

// Upper bound g(theta, rho) on the Counterbalance underestimation probability:
//   rho >= 7:                theta^-4 / 8
//   1 + theta^-2 <= rho <= 7: int_0^{theta^-2} chi1^2((rho-1)t/(1-t)) p_(1,rho-1)(theta^-2 - t) dt
//   1 <= rho < 1 + theta^-2:  same integral with p_(1,0)((theta^-2 - t)/rho)
// The t -> theta^-2 endpoint singularity is removed by t = theta^-2 (1 - u^2).
// At rho = 7 both closed pieces apply; the smaller one is returned.
double g_cb(double theta, double rho);

// the two integral pieces individually (the bound is piecewise; at the seam
// rho = 1 + theta^-2 they need not agree)
double g_cb_case2(double theta, double rho);
double g_cb_case3(double theta, double rho);

// max over rho in [1, 7]: 2000-point log grid + golden-section refinement,
// then max with the rho >= 7 closed form.
double g_cb_sup(double theta);

struct GCurve {
  std::vector<double> theta_grid;
  std::vector<double> g_values;
  double rho_cap = 7.0;
};
GCurve g_curve(const std::vector<double>& theta_grid);

enum class Method { closed_form, numeric_inversion, oracle_mc };

struct CalibrationEntry {
  double delta = 0.0;
  est::EstimatorKind kind;
  double theta = 1.0;
  Method method = Method::closed_form;
};

struct CalibrationTable {
  std::vector<CalibrationEntry> entries;
};

std::string to_json(const CalibrationTable& table);
CalibrationTable table_from_json(const std::string& text);

// realizable theta: closed forms for Vanilla and Dixon, bisection on g_cb_sup
// for Counterbalance (bracket [1, 64], widened x2 on failure, width 1e-4)
CalibrationEntry theta_for_delta(est::EstimatorKind kind, double delta);

// oracle theta = ||A|| / delta-quantile of the base statistic (type-7 quantile)
double oracle_theta(const core::LinearOperator& op, const core::GroundTruth& truth,
                    est::EstimatorKind kind, double delta, std::size_t n_trials,
                    est::RandomSource rng);

// interpolated order statistic (type 7) of an unsorted sample
double quantile_type7(std::vector<double> values, double p);

}  // namespace specbound::cal
