#include "specbound/bench.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <thread>

#include "json.hpp"

namespace specbound::bench {

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& body) {
  if (workers < 1) workers = 1;
  if (workers == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(64);
      if (i >= n) return;
      std::size_t end = std::min(n, i + 64);
      for (; i < end; ++i) body(i);
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
}

TrialBatch run_batch(const core::LinearOperator& op, const core::GroundTruth& truth,
                     est::EstimatorKind kind, double theta, std::size_t n_trials,
                     std::uint64_t base_seed, int workers) {
  if (n_trials < 1) throw contract_error("run_batch: n_trials >= 1 required");
  TrialBatch batch;
  batch.kind = kind;
  batch.theta = theta;
  batch.truth = truth;
  batch.base_seed = base_seed;
  batch.base_values.assign(n_trials, 0.0);
  batch.values.assign(n_trials, 0.0);

  std::mutex log_mutex;
  std::vector<std::uint64_t> degenerate;
  parallel_for(n_trials, workers, [&](std::size_t i) {
    std::uint64_t stream = i;
    for (int round = 1;; ++round) {
      try {
        batch.base_values[i] = est::base_statistic(op, kind, {base_seed, stream});
        break;
      } catch (const degenerate_draw_error&) {
        {
          std::lock_guard<std::mutex> lk(log_mutex);
          degenerate.push_back(stream);
        }
        if (round > 8)
          throw contract_error("run_batch: trial " + std::to_string(i) +
                                     " degenerate after 8 redraws (zero operator?)");
        stream = static_cast<std::uint64_t>(round) * n_trials + i;
      }
    }
    batch.values[i] = theta * batch.base_values[i];
  });
  std::sort(degenerate.begin(), degenerate.end());
  batch.degenerate_streams = std::move(degenerate);
  return batch;
}

BenchSummary summarize(const TrialBatch& batch) {
  if (batch.values.empty()) throw contract_error("summarize: empty batch");
  BenchSummary s;
  s.matrix_id = batch.matrix_id;
  s.kind = batch.kind.name();
  s.theta = batch.theta;
  s.n_trials = batch.values.size();
  double norm = batch.truth.spectral_norm;
  double sum = 0.0, err = 0.0;
  std::size_t under = 0;
  for (double v : batch.values) {
    sum += v;
    err += std::fabs(v - norm);
    if (v <= norm) ++under;
  }
  s.mean = sum / s.n_trials;
  s.mae = err / s.n_trials;
  s.delta_real = static_cast<double>(under) / s.n_trials;
  double var = 0.0;
  for (double v : batch.values) var += (v - s.mean) * (v - s.mean);
  s.std_dev = s.n_trials > 1 ? std::sqrt(var / (s.n_trials - 1)) : 0.0;
  for (double p : {0.01, 0.05, 0.5, 0.95, 0.99})
    s.quantiles[p] = cal::quantile_type7(batch.values, p);
  return s;
}

std::vector<ConvergencePoint> convergence_curve(const core::LinearOperator& op,
                                                const core::GroundTruth& truth,
                                                est::EstimatorKind kind,
                                                const std::vector<int>& budgets, double delta,
                                                std::size_t n_trials, std::uint64_t base_seed,
                                                int workers) {
  if (budgets.empty()) throw contract_error("convergence_curve: no budgets");
  for (int m : budgets)
    if (m <= 0 || m % 3 != 0)
      throw contract_error("convergence_curve: budget " + std::to_string(m) +
                                 " is not a positive multiple of 3");
  std::vector<ConvergencePoint> points;
  for (int m : budgets) {
    ConvergencePoint pt;
    pt.budget = m;
    std::vector<double> vals(n_trials);
    if (kind.tag == est::EstimatorKind::Tag::vanilla) {
      double theta = std::sqrt(2.0 / M_PI) * std::pow(delta, -1.0 / m);
      pt.kind = est::EstimatorKind::vanilla(m).name();
      pt.theta_used = theta;
      parallel_for(n_trials, workers, [&](std::size_t i) {
        vals[i] = theta * est::base_statistic(op, est::EstimatorKind::vanilla(m),
                                              {base_seed, i});
      });
    } else {
      int r = m / 3;
      double delta_rep = std::pow(delta, 1.0 / r);
      double theta = cal::theta_for_delta(kind, delta_rep).theta;
      pt.kind = kind.name();
      pt.theta_used = theta;
      parallel_for(n_trials, workers, [&](std::size_t i) {
        double best = 0.0;
        for (int j = 0; j < r; ++j) {
          std::uint64_t stream = i * static_cast<std::uint64_t>(r) + j;
          best = std::max(best, est::base_statistic(op, kind, {base_seed, stream}));
        }
        vals[i] = theta * best;
      });
    }
    double sum = 0.0;
    for (double v : vals) sum += v;
    pt.mean = sum / n_trials;
    double var = 0.0;
    for (double v : vals) var += (v - pt.mean) * (v - pt.mean);
    pt.std_dev = n_trials > 1 ? std::sqrt(var / (n_trials - 1)) : 0.0;
    points.push_back(pt);
    (void)truth;
  }
  return points;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json summary_to_json(const BenchSummary& s) {
  nlohmann::json j;
  j["matrix_id"] = s.matrix_id;
  j["kind"] = s.kind;
  j["theta"] = s.theta;
  j["n_trials"] = s.n_trials;
  j["delta_real"] = s.delta_real;
  j["mae"] = s.mae;
  j["mean"] = s.mean;
  j["std"] = s.std_dev;
  j["q01"] = s.quantiles.at(0.01);
  j["q05"] = s.quantiles.at(0.05);
  j["q50"] = s.quantiles.at(0.5);
  j["q95"] = s.quantiles.at(0.95);
  j["q99"] = s.quantiles.at(0.99);
  return j;
}

}  // namespace

std::string summaries_to_json(const std::vector<BenchSummary>& summaries) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& s : summaries) arr.push_back(summary_to_json(s));
  return arr.dump(2);
}

void export_results(const std::vector<BenchSummary>& summaries, const std::string& path,
                    ExportFormat format) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw io_error("cannot write " + path);
  if (format == ExportFormat::json) {
    out << summaries_to_json(summaries) << '\n';
  } else {
    out << "matrix_id,kind,theta,n_trials,delta_real,mae,mean,std,q01,q05,q50,q95,q99\n";
    for (const auto& s : summaries) {
      out << s.matrix_id << ',' << s.kind << ',' << fmt(s.theta) << ',' << s.n_trials << ','
          << fmt(s.delta_real) << ',' << fmt(s.mae) << ',' << fmt(s.mean) << ','
          << fmt(s.std_dev) << ',' << fmt(s.quantiles.at(0.01)) << ','
          << fmt(s.quantiles.at(0.05)) << ',' << fmt(s.quantiles.at(0.5)) << ','
          << fmt(s.quantiles.at(0.95)) << ',' << fmt(s.quantiles.at(0.99)) << '\n';
    }
  }
  if (!out) throw io_error("write failure for " + path);
}

std::vector<BenchSummary> summaries_from_json(const std::string& text) {
  std::vector<BenchSummary> out;
  for (const auto& j : nlohmann::json::parse(text)) {
    BenchSummary s;
    s.matrix_id = j.at("matrix_id").get<std::string>();
    s.kind = j.at("kind").get<std::string>();
    s.theta = j.at("theta").get<double>();
    s.n_trials = j.at("n_trials").get<std::size_t>();
    s.delta_real = j.at("delta_real").get<double>();
    s.mae = j.at("mae").get<double>();
    s.mean = j.at("mean").get<double>();
    s.std_dev = j.at("std").get<double>();
    s.quantiles[0.01] = j.at("q01").get<double>();
    s.quantiles[0.05] = j.at("q05").get<double>();
    s.quantiles[0.5] = j.at("q50").get<double>();
    s.quantiles[0.95] = j.at("q95").get<double>();
    s.quantiles[0.99] = j.at("q99").get<double>();
    out.push_back(std::move(s));
  }
  return out;
}

Histogram histogram_data(const TrialBatch& batch, std::size_t bins) {
  if (bins < 2) throw contract_error("histogram_data: bins >= 2 required");
  if (batch.values.empty()) throw contract_error("histogram_data: empty batch");
  double lo = batch.values.front(), hi = lo;
  for (double v : batch.values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  Histogram h;
  if (lo == hi) {
    h.bins.emplace_back(lo, batch.values.size());
    h.degenerate = true;
    return h;
  }
  std::vector<std::size_t> counts(bins, 0);
  double width = (hi - lo) / bins;
  for (double v : batch.values) {
    std::size_t b = std::min(bins - 1, static_cast<std::size_t>((v - lo) / width));
    ++counts[b];
  }
  for (std::size_t b = 0; b < bins; ++b)
    h.bins.emplace_back(lo + width * (b + 0.5), counts[b]);
  return h;
}

void export_histogram(const Histogram& h, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw io_error("cannot write " + path);
  out << "bin_center,count\n";
  for (const auto& [c, n] : h.bins) out << fmt(c) << ',' << n << '\n';
  if (!out) throw io_error("write failure for " + path);
}

}  // namespace specbound::bench
