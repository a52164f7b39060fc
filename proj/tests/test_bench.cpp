#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "golden.hpp"
#include "specbound/bench.hpp"
#include "specbound/dense_kernels.hpp"
#include "specbound/zoo.hpp"
#include "testutil.hpp"

using namespace specbound;
using testutil::rel_err;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("specbound_bench_test_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

core::GroundTruth hilbert_truth(std::size_t n) { return core::dense_svd(core::hilbert_matrix(n)); }

}  // namespace

TEST_CASE("parallel_for visits every index once, any worker count") {
  for (int workers : {1, 2, 5}) {
    std::vector<std::atomic<int>> hits(1000);
    bench::parallel_for(1000, workers, [&](std::size_t i) { ++hits[i]; });
    for (auto& h : hits) CHECK(h == 1);
  }
  bench::parallel_for(0, 3, [](std::size_t) { FAIL("body called for n = 0"); });
}

TEST_CASE("run_batch is deterministic and worker-count independent") {
  auto op = core::hilbert_operator(10);
  auto truth = hilbert_truth(10);
  auto kind = est::EstimatorKind::counterbalance();
  auto a = bench::run_batch(op, truth, kind, 1.58, 500, 1, 1);
  auto b = bench::run_batch(op, truth, kind, 1.58, 500, 1, 3);
  REQUIRE(a.values.size() == 500);
  CHECK(a.values == b.values);  // bitwise
  CHECK(a.base_values == b.base_values);
  auto c = bench::run_batch(op, truth, kind, 1.58, 500, 2, 1);
  CHECK(a.values != c.values);
}

TEST_CASE("run_batch trial i uses stream i") {
  auto op = core::hilbert_operator(8);
  auto truth = hilbert_truth(8);
  auto batch = bench::run_batch(op, truth, est::EstimatorKind::dixon(), 2.0, 20, 42, 2);
  for (std::size_t i = 0; i < 20; ++i) {
    double direct = est::dixon(op, 2.0, {42, i}).value;
    CHECK(batch.values[i] == direct);
    CHECK(batch.base_values[i] == direct / 2.0);  // exact: theta = 2 is a power of two
  }
}

TEST_CASE("run_batch applies theta on top of stored base values") {
  auto op = core::hilbert_operator(8);
  auto truth = hilbert_truth(8);
  auto batch = bench::run_batch(op, truth, est::EstimatorKind::vanilla(3), 2.17, 50, 7, 1);
  for (std::size_t i = 0; i < 50; ++i) {
    CHECK(batch.values[i] == 2.17 * batch.base_values[i]);
    CHECK(batch.base_values[i] == est::base_statistic(op, est::EstimatorKind::vanilla(3), {7, i}));
  }
  CHECK(batch.theta == 2.17);
  CHECK(batch.base_seed == 7);
  CHECK(batch.degenerate_streams.empty());
}

TEST_CASE("run_batch rejects empty batches and surfaces degeneracy") {
  auto op = core::hilbert_operator(4);
  auto truth = hilbert_truth(4);
  CHECK_THROWS_AS(bench::run_batch(op, truth, est::EstimatorKind::dixon(), 2.0, 0, 1, 1),
                  contract_error);
  auto zero = core::make_dense_operator(core::DenseMatrix(4, 4));
  core::GroundTruth zt;
  CHECK_THROWS_WITH_AS(
      bench::run_batch(zero, zt, est::EstimatorKind::counterbalance(), 1.58, 10, 1, 1),
      doctest::Contains("degenerate"), contract_error);
}

TEST_CASE("summarize computes the documented statistics") {
  // hand-built batch with known values
  bench::TrialBatch b;
  b.kind = est::EstimatorKind::vanilla(3);
  b.theta = 2.0;
  b.matrix_id = "toy";
  b.values = {1.0, 2.0, 3.0, 4.0, 5.0};
  b.base_values = {0.5, 1.0, 1.5, 2.0, 2.5};
  b.truth.spectral_norm = 2.5;
  auto s = bench::summarize(b);
  CHECK(s.matrix_id == "toy");
  CHECK(s.kind == "vanilla3");
  CHECK(s.n_trials == 5);
  // values <= 2.5: {1, 2} -> 2/5
  CHECK(s.delta_real == doctest::Approx(0.4).epsilon(1e-15));
  // |v - 2.5|: {1.5, 0.5, 0.5, 1.5, 2.5} -> mean 1.3
  CHECK(s.mae == doctest::Approx(1.3).epsilon(1e-15));
  CHECK(s.mean == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(s.std_dev == doctest::Approx(std::sqrt(2.5)).epsilon(1e-14));  // sample (N-1)
  CHECK(s.quantiles.at(0.5) == doctest::Approx(3.0));
  CHECK(s.quantiles.at(0.01) == doctest::Approx(1.04));   // type-7 on sorted {1..5}
  CHECK(s.quantiles.at(0.99) == doctest::Approx(4.96));
  CHECK(s.quantiles.size() == 5);
}

TEST_CASE("rank-1 batch never undershoots with theta above one") {
  core::DenseMatrix m(6, 6);
  m.at(2, 2) = 4.0;  // rank-1, sigma = 4
  auto op = core::make_dense_operator(m);
  core::GroundTruth truth;
  truth.spectral_norm = 4.0;
  auto batch = bench::run_batch(op, truth, est::EstimatorKind::counterbalance(), 1.58, 300, 9, 1);
  for (double v : batch.values) CHECK(v >= 1.58 * 4.0 * (1.0 - 1e-12));
  auto s = bench::summarize(batch);
  CHECK(s.delta_real == 0.0);
}

TEST_CASE("convergence curve: budget rule and replicate maxima") {
  auto op = core::hilbert_operator(6);
  auto truth = hilbert_truth(6);
  CHECK_THROWS_AS(bench::convergence_curve(op, truth, est::EstimatorKind::counterbalance(), {4},
                                           0.05, 10, 1, 1),
                  contract_error);
  CHECK_THROWS_AS(bench::convergence_curve(op, truth, est::EstimatorKind::vanilla(3), {0}, 0.05,
                                           10, 1, 1),
                  contract_error);
  CHECK_THROWS_AS(bench::convergence_curve(op, truth, est::EstimatorKind::vanilla(3), {-3}, 0.05,
                                           10, 1, 1),
                  contract_error);

  auto pts = bench::convergence_curve(op, truth, est::EstimatorKind::counterbalance(), {3, 6},
                                      0.05, 40, 11, 1);
  REQUIRE(pts.size() == 2);
  CHECK(pts[0].budget == 3);
  CHECK(pts[1].budget == 6);
  CHECK(pts[0].kind == "counterbalance");
  // budget 3 = one replicate at theta solving sup g = 0.05
  CHECK(std::abs(pts[0].theta_used -
                 cal::theta_for_delta(est::EstimatorKind::counterbalance(), 0.05).theta) < 1e-12);
  // budget 6 = two replicates at the weaker per-replicate delta -> smaller theta
  CHECK(pts[1].theta_used < pts[0].theta_used);
  // budget-3 mean equals the plain batch mean at the same seed and theta
  auto batch = bench::run_batch(op, truth, est::EstimatorKind::counterbalance(),
                                pts[0].theta_used, 40, 11, 1);
  CHECK(rel_err(pts[0].mean, bench::summarize(batch).mean) < 1e-13);

  // vanilla: budget m means k = m draws
  auto vp = bench::convergence_curve(op, truth, est::EstimatorKind::vanilla(3), {3, 12}, 0.05, 30,
                                     11, 1);
  CHECK(vp[0].kind == "vanilla3");
  CHECK(vp[1].kind == "vanilla12");
  CHECK(vp[1].theta_used < vp[0].theta_used);
}

TEST_CASE("convergence curve is worker independent") {
  auto op = core::hilbert_operator(5);
  auto truth = hilbert_truth(5);
  auto a = bench::convergence_curve(op, truth, est::EstimatorKind::dixon(), {3, 9}, 0.05, 25, 3, 1);
  auto b = bench::convergence_curve(op, truth, est::EstimatorKind::dixon(), {3, 9}, 0.05, 25, 3, 4);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].mean == b[i].mean);
    CHECK(a[i].std_dev == b[i].std_dev);
  }
}

TEST_CASE("summary export: csv bytes and json round trip") {
  auto op = core::hilbert_operator(6);
  auto truth = hilbert_truth(6);
  std::vector<bench::BenchSummary> sums{
      bench::summarize(bench::run_batch(op, truth, est::EstimatorKind::counterbalance(), 1.58, 60,
                                        1, 1)),
      bench::summarize(bench::run_batch(op, truth, est::EstimatorKind::vanilla(3), 2.17, 60, 1,
                                        1))};

  TempDir tmp;
  auto csv = tmp.path / "summary.csv";
  bench::export_results(sums, csv.string(), bench::ExportFormat::csv);
  auto text = slurp(csv);
  CHECK(text.rfind("matrix_id,kind,theta,n_trials,delta_real,mae,mean,std,q01,q05,q50,q95,q99\n",
                   0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);  // header + 2 rows

  // byte determinism of the export itself
  auto csv2 = tmp.path / "summary2.csv";
  bench::export_results(sums, csv2.string(), bench::ExportFormat::csv);
  CHECK(slurp(csv2) == text);

  auto back = bench::summaries_from_json(bench::summaries_to_json(sums));
  REQUIRE(back.size() == sums.size());
  for (std::size_t i = 0; i < sums.size(); ++i) {
    CHECK(back[i].matrix_id == sums[i].matrix_id);
    CHECK(back[i].kind == sums[i].kind);
    CHECK(back[i].theta == sums[i].theta);
    CHECK(back[i].n_trials == sums[i].n_trials);
    CHECK(back[i].delta_real == sums[i].delta_real);
    CHECK(back[i].mae == sums[i].mae);
    CHECK(back[i].mean == sums[i].mean);
    CHECK(back[i].std_dev == sums[i].std_dev);
    CHECK(back[i].quantiles == sums[i].quantiles);
  }

  auto json_path = tmp.path / "summary.json";
  bench::export_results(sums, json_path.string(), bench::ExportFormat::json);
  auto from_file = bench::summaries_from_json(slurp(json_path));
  CHECK(from_file.size() == sums.size());
}

TEST_CASE("histogram partitions the batch") {
  auto op = core::hilbert_operator(6);
  auto truth = hilbert_truth(6);
  auto batch = bench::run_batch(op, truth, est::EstimatorKind::vanilla(3), 2.17, 400, 1, 1);
  auto h = bench::histogram_data(batch, 30);
  CHECK(!h.degenerate);
  REQUIRE(h.bins.size() == 30);
  std::size_t total = 0;
  double lo = *std::min_element(batch.values.begin(), batch.values.end());
  double hi = *std::max_element(batch.values.begin(), batch.values.end());
  for (auto& [center, count] : h.bins) {
    total += count;
    CHECK(center > lo - (hi - lo));
    CHECK(center < hi + (hi - lo));
  }
  CHECK(total == 400);
  CHECK_THROWS_AS(bench::histogram_data(batch, 1), contract_error);

  // constant batch collapses to a single flagged bin
  bench::TrialBatch flat;
  flat.values = {2.0, 2.0, 2.0};
  flat.base_values = {1.0, 1.0, 1.0};
  flat.theta = 2.0;
  auto hf = bench::histogram_data(flat, 10);
  CHECK(hf.degenerate);
  REQUIRE(hf.bins.size() == 1);
  CHECK(hf.bins[0].first == 2.0);
  CHECK(hf.bins[0].second == 3);

  TempDir tmp;
  auto p = tmp.path / "hist.csv";
  bench::export_histogram(h, p.string());
  auto text = slurp(p);
  CHECK(text.rfind("bin_center,count\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 31);
}
