#include "specbound/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "json.hpp"
#include "specbound/special_functions.hpp"

namespace specbound::cal {

using special::chi2_cdf;
using special::integrate;
using special::wchi2_pdf;

namespace {

void check_domain(double theta, double rho) {
  if (!(theta >= 1.0)) throw contract_error("g_cb: theta >= 1 required");
  if (!(rho >= 1.0)) throw contract_error("g_cb: rho >= 1 required");
}

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

double case1(double theta) { return 1.0 / (8.0 * theta * theta * theta * theta); }

}  // namespace

double g_cb_case2(double theta, double rho) {
  check_domain(theta, rho);
  double T = 1.0 / (theta * theta);
  double alpha = rho - 1.0;
  auto f = [&](double u) {
    double t = T * (1.0 - u * u);
    double arg = alpha * t / (1.0 - t);
    return chi2_cdf(1, arg) * wchi2_pdf(alpha, T * u * u) * 2.0 * T * u;
  };
  return clamp01(integrate(f, 0.0, 1.0, 1e-9));
}

double g_cb_case3(double theta, double rho) {
  check_domain(theta, rho);
  if (rho == 1.0) return 0.0;  // chi1^2(0) = 0 throughout
  double T = 1.0 / (theta * theta);
  // p_(1,0)((T-t)/rho) * 2Tu with t = T(1-u^2): the 1/sqrt singularity cancels
  // against the substitution Jacobian, leaving 2 sqrt(T rho / 2pi) e^{-Tu^2/(2 rho)}
  double front = 2.0 * std::sqrt(T * rho / (2.0 * M_PI));
  auto f = [&](double u) {
    double t = T * (1.0 - u * u);
    double arg = (rho - 1.0) * t / (1.0 - t);
    return chi2_cdf(1, arg) * front * std::exp(-T * u * u / (2.0 * rho));
  };
  return clamp01(integrate(f, 0.0, 1.0, 1e-9));
}

double g_cb(double theta, double rho) {
  check_domain(theta, rho);
  double T = 1.0 / (theta * theta);
  if (rho > 7.0) return case1(theta);
  if (rho >= 1.0 + T) {
    double v = g_cb_case2(theta, rho);
    return rho == 7.0 ? std::min(v, case1(theta)) : v;
  }
  return g_cb_case3(theta, rho);
}

double g_cb_sup(double theta) {
  const int grid_n = 2000;
  const double log7 = std::log(7.0);
  double best = 0.0;
  int best_i = 0;
  std::vector<double> rhos(grid_n);
  for (int i = 0; i < grid_n; ++i) {
    rhos[i] = std::exp(log7 * i / (grid_n - 1));
    double v = g_cb(theta, rhos[i]);
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  // golden-section refinement around the grid argmax
  double a = rhos[std::max(0, best_i - 1)];
  double b = rhos[std::min(grid_n - 1, best_i + 1)];
  const double gr = 0.6180339887498949;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = g_cb(theta, c), fd = g_cb(theta, d);
  while (b - a > 1e-6) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = g_cb(theta, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = g_cb(theta, d);
    }
  }
  best = std::max(best, std::max(fc, fd));
  return std::max(best, case1(theta));
}

GCurve g_curve(const std::vector<double>& theta_grid) {
  GCurve c;
  c.theta_grid = theta_grid;
  c.g_values.reserve(theta_grid.size());
  for (double th : theta_grid) c.g_values.push_back(g_cb_sup(th));
  return c;
}

CalibrationEntry theta_for_delta(est::EstimatorKind kind, double delta) {
  if (!(delta > 0.0 && delta < 1.0))
    throw contract_error("theta_for_delta: delta must lie in (0, 1)");
  CalibrationEntry e;
  e.delta = delta;
  e.kind = kind;
  switch (kind.tag) {
    case est::EstimatorKind::Tag::vanilla:
      e.theta = std::sqrt(2.0 / M_PI) * std::pow(delta, -1.0 / kind.k);
      e.method = Method::closed_form;
      return e;
    case est::EstimatorKind::Tag::dixon:
      e.theta = std::cbrt(2.0 / (M_PI * delta));
      e.method = Method::closed_form;
      return e;
    default: break;
  }
  // the inversion costs seconds; memoize per process (pure in delta)
  static std::mutex memo_mutex;
  static std::map<double, double> memo;
  e.method = Method::numeric_inversion;
  {
    std::lock_guard<std::mutex> lock(memo_mutex);
    auto hit = memo.find(delta);
    if (hit != memo.end()) {
      e.theta = hit->second;
      return e;
    }
  }
  double lo = 1.0, hi = 64.0;
  if (g_cb_sup(lo) <= delta) {
    e.theta = 1.0;
    std::lock_guard<std::mutex> lock(memo_mutex);
    memo[delta] = e.theta;
    return e;
  }
  int widenings = 0;
  while (g_cb_sup(hi) > delta) {
    lo = hi;
    hi *= 2.0;
    if (++widenings > 10)
      throw contract_error("theta_for_delta: bisection bracket failure");
  }
  while (hi - lo > 1e-4) {
    double mid = 0.5 * (lo + hi);
    (g_cb_sup(mid) > delta ? lo : hi) = mid;
  }
  e.theta = 0.5 * (lo + hi);
  std::lock_guard<std::mutex> lock(memo_mutex);
  memo[delta] = e.theta;
  return e;
}

double quantile_type7(std::vector<double> values, double p) {
  if (values.empty()) throw contract_error("quantile: empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw contract_error("quantile: p outside [0, 1]");
  std::sort(values.begin(), values.end());
  double h = p * (values.size() - 1);
  std::size_t i = static_cast<std::size_t>(h);
  if (i + 1 >= values.size()) return values.back();
  double frac = h - static_cast<double>(i);
  return values[i] + frac * (values[i + 1] - values[i]);
}

double oracle_theta(const core::LinearOperator& op, const core::GroundTruth& truth,
                    est::EstimatorKind kind, double delta, std::size_t n_trials,
                    est::RandomSource rng) {
  if (!(delta > 0.0 && delta < 1.0)) throw contract_error("oracle_theta: delta in (0,1)");
  if (n_trials < static_cast<std::size_t>(std::ceil(10.0 / delta)))
    throw contract_error("oracle_theta: need n_trials >= 10/delta");
  std::vector<double> base(n_trials);
  std::size_t degenerate = 0;
  const std::size_t max_degenerate = static_cast<std::size_t>(0.001 * n_trials);
  for (std::size_t i = 0; i < n_trials; ++i) {
    std::uint64_t stream = i;
    for (int round = 1;; ++round) {
      try {
        base[i] = est::base_statistic(op, kind, {rng.seed, stream});
        break;
      } catch (const degenerate_draw_error&) {
        if (++degenerate > max_degenerate)
          throw contract_error(
              "oracle_theta: degenerate draws exceeded 0.1% of trials (" +
              std::to_string(degenerate) + "/" + std::to_string(n_trials) + ")");
        stream = static_cast<std::uint64_t>(round) * n_trials + i;
      }
    }
  }
  double q = quantile_type7(std::move(base), delta);
  if (!(q > 0.0)) throw contract_error("oracle_theta: delta-quantile is not positive");
  return truth.spectral_norm / q;
}

namespace {

nlohmann::json entry_to_json(const CalibrationEntry& e) {
  nlohmann::json j;
  j["delta"] = e.delta;
  switch (e.kind.tag) {
    case est::EstimatorKind::Tag::vanilla:
      j["kind"] = "vanilla";
      j["k"] = e.kind.k;
      break;
    case est::EstimatorKind::Tag::dixon: j["kind"] = "dixon"; break;
    default: j["kind"] = "counterbalance"; break;
  }
  j["theta"] = e.theta;
  j["method"] = e.method == Method::closed_form      ? "closed_form"
                : e.method == Method::numeric_inversion ? "numeric_inversion"
                                                        : "oracle_mc";
  return j;
}

CalibrationEntry entry_from_json(const nlohmann::json& j) {
  CalibrationEntry e;
  e.delta = j.at("delta").get<double>();
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "vanilla")
    e.kind = est::EstimatorKind::vanilla(j.at("k").get<int>());
  else if (kind == "dixon")
    e.kind = est::EstimatorKind::dixon();
  else if (kind == "counterbalance")
    e.kind = est::EstimatorKind::counterbalance();
  else
    throw contract_error("calibration table: unknown kind '" + kind + "'");
  e.theta = j.at("theta").get<double>();
  std::string m = j.at("method").get<std::string>();
  e.method = m == "closed_form"         ? Method::closed_form
             : m == "numeric_inversion" ? Method::numeric_inversion
                                        : Method::oracle_mc;
  return e;
}

}  // namespace

std::string to_json(const CalibrationTable& table) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& e : table.entries) arr.push_back(entry_to_json(e));
  return arr.dump(2);
}

CalibrationTable table_from_json(const std::string& text) {
  CalibrationTable t;
  for (const auto& j : nlohmann::json::parse(text)) t.entries.push_back(entry_from_json(j));
  return t;
}

}  // namespace specbound::cal
