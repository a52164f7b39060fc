#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "golden.hpp"
#include "specbound/calibration.hpp"
#include "specbound/dense_kernels.hpp"
#include "specbound/special_functions.hpp"
#include "specbound/zoo.hpp"
#include "testutil.hpp"

using namespace specbound;
using testutil::rel_err;

namespace {

// integral pins: quadrature runs to 1e-9 absolute, pin digits are exact
bool close_pin(double got, double want) {
  return std::abs(got - want) < 5e-9 + 1e-8 * std::abs(want);
}

core::LinearOperator rank1_diag(double sigma, std::size_t n) {
  core::DenseMatrix m(n, n);
  m.at(0, 0) = sigma;
  return core::make_dense_operator(m);
}

}  // namespace

TEST_CASE("g_cb domain checks") {
  CHECK_THROWS_AS(cal::g_cb(0.99, 2.0), contract_error);
  CHECK_THROWS_AS(cal::g_cb(2.0, 0.5), contract_error);
  CHECK_THROWS_AS(cal::g_cb_case2(0.5, 2.0), contract_error);
  CHECK_THROWS_AS(cal::g_cb_case3(2.0, 0.0), contract_error);
}

TEST_CASE("g_cb closed form above the effective-rank cap") {
  for (double theta : {1.0, 1.28, 1.58, 2.46, 5.1, 10.0}) {
    double want = 1.0 / (8.0 * theta * theta * theta * theta);
    CHECK(cal::g_cb(theta, 7.01) == want);
    CHECK(cal::g_cb(theta, 100.0) == want);
    CHECK(cal::g_cb(theta, 1e6) == want);
  }
}

TEST_CASE("g_cb matches pinned integral values") {
  for (const auto& p : golden::g_cb_pins) {
    double got = cal::g_cb(p.theta, p.rho);
    INFO("theta=", p.theta, " rho=", p.rho, " got=", got, " want=", p.value);
    CHECK(close_pin(got, p.value));
  }
}

TEST_CASE("g_cb at the cap takes the smaller piece") {
  for (double theta : {1.0, 1.28, 1.58, 2.46}) {
    double v = cal::g_cb(theta, 7.0);
    double c1 = 1.0 / (8.0 * theta * theta * theta * theta);
    double c2 = cal::g_cb_case2(theta, 7.0);
    CHECK(v == std::min(c1, c2));
  }
}

TEST_CASE("g_cb piecewise dispatch around the seam") {
  for (double theta : {1.28, 1.58, 2.46}) {
    double seam = 1.0 + 1.0 / (theta * theta);
    double below = seam - 1e-6, above = seam + 1e-6;
    CHECK(cal::g_cb(theta, below) == cal::g_cb_case3(theta, below));
    CHECK(cal::g_cb(theta, above) == cal::g_cb_case2(theta, above));
    CHECK(cal::g_cb(theta, seam) == cal::g_cb_case2(theta, seam));
  }
}

TEST_CASE("g_cb stays a probability over the whole domain") {
  for (double theta : {1.0, 1.1, 1.28, 1.58, 2.0, 2.46, 5.1, 8.0}) {
    for (double rho : {1.0, 1.01, 1.05, 1.1, 1.3, 1.6, 2.0, 3.5, 5.0, 6.99, 7.0, 9.0, 1e4}) {
      double v = cal::g_cb(theta, rho);
      INFO("theta=", theta, " rho=", rho, " v=", v);
      CHECK(std::isfinite(v));
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("power-ratio quantile factor inside the integrand") {
  // chi1^2((rho-1) t / (1-t)) is the underestimation factor at fixed split t
  for (const auto& p : golden::ratio_quantile_pins) {
    double arg = (p.rho - 1.0) * p.t / (1.0 - p.t);
    CHECK(rel_err(special::chi2_cdf(1, arg), p.value) < 1e-10);
  }
}

TEST_CASE("g_cb_sup matches pins and dominates spot values") {
  for (const auto& p : golden::g_cb_sup_pins) {
    double got = cal::g_cb_sup(p.theta);
    INFO("theta=", p.theta, " got=", got, " want=", p.value);
    CHECK(rel_err(got, p.value) < 1e-5);
    for (double rho : {1.05, 1.3, 2.0, 3.5, 7.0, 50.0})
      CHECK(got >= cal::g_cb(p.theta, rho) - 1e-9);
  }
}

TEST_CASE("g_curve is nonincreasing in theta") {
  std::vector<double> grid{1.0, 1.2, 1.5, 2.0, 3.0, 5.0, 8.0};
  auto c = cal::g_curve(grid);
  REQUIRE(c.g_values.size() == grid.size());
  CHECK(c.rho_cap == 7.0);
  for (std::size_t i = 1; i < c.g_values.size(); ++i)
    CHECK(c.g_values[i] <= c.g_values[i - 1] + 1e-12);
}

TEST_CASE("theta_for_delta closed forms") {
  for (const auto& p : golden::theta_v3_pins) {
    auto e = cal::theta_for_delta(est::EstimatorKind::vanilla(3), p.delta);
    CHECK(rel_err(e.theta, p.theta) < 1e-9);
    CHECK(rel_err(e.theta, std::sqrt(2.0 / M_PI) * std::pow(p.delta, -1.0 / 3.0)) < 1e-14);
    CHECK(e.method == cal::Method::closed_form);
    CHECK(e.delta == p.delta);
  }
  for (const auto& p : golden::theta_dixon_pins) {
    auto e = cal::theta_for_delta(est::EstimatorKind::dixon(), p.delta);
    CHECK(rel_err(e.theta, p.theta) < 1e-9);
    CHECK(rel_err(e.theta, std::cbrt(2.0 / (M_PI * p.delta))) < 1e-14);
    CHECK(e.method == cal::Method::closed_form);
  }
  // vanilla k=1 and k=12 sanity
  CHECK(rel_err(cal::theta_for_delta(est::EstimatorKind::vanilla(1), 0.05).theta,
                std::sqrt(2.0 / M_PI) / 0.05) < 1e-14);
  CHECK(rel_err(cal::theta_for_delta(est::EstimatorKind::vanilla(12), 0.05).theta,
                std::sqrt(2.0 / M_PI) * std::pow(0.05, -1.0 / 12.0)) < 1e-14);
}

TEST_CASE("theta_for_delta inverts the counterbalance bound") {
  for (const auto& p : golden::theta_cb_pins) {
    auto e = cal::theta_for_delta(est::EstimatorKind::counterbalance(), p.delta);
    INFO("delta=", p.delta, " got=", e.theta, " want=", p.theta);
    CHECK(std::abs(e.theta - p.theta) < 2e-4);
    CHECK(e.method == cal::Method::numeric_inversion);
    // the returned theta really solves sup g = delta to bisection width
    CHECK(cal::g_cb_sup(e.theta + 2e-4) <= p.delta);
    CHECK(cal::g_cb_sup(e.theta - 2e-4) >= p.delta);
  }
  for (const auto& p : golden::theta_cb_replicate_pins) {
    auto e = cal::theta_for_delta(est::EstimatorKind::counterbalance(), p.delta);
    INFO("delta=", p.delta, " got=", e.theta, " want=", p.theta);
    CHECK(std::abs(e.theta - p.theta) < 2e-4);
  }
  // slack target: theta = 1 already meets the bound
  CHECK(cal::theta_for_delta(est::EstimatorKind::counterbalance(), 0.9).theta == 1.0);
}

TEST_CASE("theta_for_delta rejects bad deltas") {
  for (double d : {0.0, -0.1, 1.0, 1.5}) {
    CHECK_THROWS_AS(cal::theta_for_delta(est::EstimatorKind::counterbalance(), d), contract_error);
    CHECK_THROWS_AS(cal::theta_for_delta(est::EstimatorKind::vanilla(3), d), contract_error);
  }
}

TEST_CASE("quantile_type7 on small samples") {
  std::vector<double> v{3.0, 1.0, 2.0, 4.0};  // unsorted on purpose
  CHECK(cal::quantile_type7(v, 0.0) == 1.0);
  CHECK(cal::quantile_type7(v, 1.0) == 4.0);
  CHECK(cal::quantile_type7(v, 0.5) == 2.5);
  CHECK(cal::quantile_type7(v, 0.25) == 1.75);
  CHECK(cal::quantile_type7({5.0}, 0.3) == 5.0);
  CHECK(cal::quantile_type7({1.0, 2.0, 3.0}, 0.5) == 2.0);
  CHECK_THROWS_AS(cal::quantile_type7({}, 0.5), contract_error);
  CHECK_THROWS_AS(cal::quantile_type7({1.0}, -0.1), contract_error);
  CHECK_THROWS_AS(cal::quantile_type7({1.0}, 1.1), contract_error);
}

TEST_CASE("oracle_theta recovers the rank-1 closed form") {
  // base statistic of vanilla_1 on A = sigma u v^T is sigma |<v, X>|, so the
  // delta-quantile is sigma * (half-normal delta-quantile) and the oracle
  // theta is 1 / halfnormal_quantile(0.05) = 15.947...
  auto op = rank1_diag(3.0, 25);
  core::GroundTruth truth;
  truth.spectral_norm = 3.0;
  double got = cal::oracle_theta(op, truth, est::EstimatorKind::vanilla(1), 0.05, 200000, {5, 0});
  double want = 1.0 / 0.0627067779432138;  // 1 / Phi^-1-half-normal(0.05)
  INFO("got=", got, " want=", want);
  CHECK(rel_err(got, want) < 0.04);

  // counterbalance base on rank-1 is sigma sqrt(1 + <v,X2>^2) >= sigma, so the
  // oracle theta always sits at or below 1
  double cb = cal::oracle_theta(op, truth, est::EstimatorKind::counterbalance(), 0.05, 50000,
                                {5, 0});
  CHECK(cb <= 1.0);
  CHECK(cb > 0.99);
}

TEST_CASE("oracle_theta preconditions") {
  auto op = rank1_diag(1.0, 4);
  core::GroundTruth truth;
  truth.spectral_norm = 1.0;
  CHECK_THROWS_AS(cal::oracle_theta(op, truth, est::EstimatorKind::vanilla(1), 0.05, 100, {0, 0}),
                  contract_error);  // 100 < 10/0.05
  CHECK_THROWS_AS(cal::oracle_theta(op, truth, est::EstimatorKind::vanilla(1), 0.0, 1000, {0, 0}),
                  contract_error);
  auto zero = core::make_dense_operator(core::DenseMatrix(4, 4));
  CHECK_THROWS_AS(
      cal::oracle_theta(zero, truth, est::EstimatorKind::counterbalance(), 0.05, 200, {0, 0}),
      contract_error);  // every draw degenerate
}

TEST_CASE("calibration table JSON round trip") {
  cal::CalibrationTable t;
  t.entries.push_back(cal::theta_for_delta(est::EstimatorKind::vanilla(3), 0.05));
  t.entries.push_back(cal::theta_for_delta(est::EstimatorKind::dixon(), 0.05));
  t.entries.push_back(cal::theta_for_delta(est::EstimatorKind::counterbalance(), 0.1));
  auto back = cal::table_from_json(cal::to_json(t));
  REQUIRE(back.entries.size() == t.entries.size());
  for (std::size_t i = 0; i < t.entries.size(); ++i) {
    CHECK(back.entries[i].delta == t.entries[i].delta);
    CHECK(back.entries[i].theta == t.entries[i].theta);
    CHECK(back.entries[i].kind.tag == t.entries[i].kind.tag);
    CHECK(back.entries[i].kind.name() == t.entries[i].kind.name());
    CHECK(back.entries[i].method == t.entries[i].method);
  }
  CHECK_THROWS_AS(cal::table_from_json(
                      R"([{"delta":0.1,"kind":"huh","theta":1.0,"method":"closed_form"}])"),
                  contract_error);
}
