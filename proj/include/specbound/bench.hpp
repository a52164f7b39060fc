#pragma once
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "specbound/calibration.hpp"
#include "specbound/estimators.hpp"
#include "specbound/linear_operator.hpp"

namespace specbound::bench {

struct TrialBatch {
  est::EstimatorKind kind;
  double theta = 1.0;
  std::string matrix_id;
  std::vector<double> values;        // theta * base, one per trial
  std::vector<double> base_values;   // theta-free statistics (values / theta)
  core::GroundTruth truth;
  std::uint64_t base_seed = 0;
  std::vector<std::uint64_t> degenerate_streams;  // redrawn trials, if any
};

struct BenchSummary {
  std::string matrix_id;
  std::string kind;
  double theta = 1.0;
  std::size_t n_trials = 0;
  double delta_real = 0.0;
  double mae = 0.0;   // mean |value - ||A||| (absolute)
  double mean = 0.0;
  double std_dev = 0.0;
  std::map<double, double> quantiles;  // {0.01, 0.05, 0.5, 0.95, 0.99}
};

struct ConvergencePoint {
  int budget = 0;  // total matvecs, multiple of 3
  std::string kind;
  double mean = 0.0;
  double std_dev = 0.0;
  double theta_used = 1.0;
};

// trial i always uses stream_id i (degenerate redraws move to round*N + i),
// so results are identical for every worker count and schedule.
TrialBatch run_batch(const core::LinearOperator& op, const core::GroundTruth& truth,
                     est::EstimatorKind kind, double theta, std::size_t n_trials,
                     std::uint64_t base_seed, int workers);

BenchSummary summarize(const TrialBatch& batch);

// Per budget m: Vanilla uses k = m with theta = sqrt(2/pi) delta^{-1/m};
// Dixon/Counterbalance run r = m/3 independent replicates, take the max, and
// use the theta solving bound(theta) = delta^{1/r} so the overall failure
// probability stays at delta.
std::vector<ConvergencePoint> convergence_curve(const core::LinearOperator& op,
                                                const core::GroundTruth& truth,
                                                est::EstimatorKind kind,
                                                const std::vector<int>& budgets, double delta,
                                                std::size_t n_trials, std::uint64_t base_seed,
                                                int workers);

enum class ExportFormat { json, csv };
void export_results(const std::vector<BenchSummary>& summaries, const std::string& path,
                    ExportFormat format);
std::string summaries_to_json(const std::vector<BenchSummary>& summaries);
std::vector<BenchSummary> summaries_from_json(const std::string& text);

struct Histogram {
  std::vector<std::pair<double, std::size_t>> bins;  // (center, count)
  bool degenerate = false;                           // constant batch collapsed to one bin
};
Histogram histogram_data(const TrialBatch& batch, std::size_t bins);
void export_histogram(const Histogram& h, const std::string& path);

// chunked index-parallel map used by the batch runners
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& body);

}  // namespace specbound::bench
