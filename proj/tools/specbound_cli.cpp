// specbound: calibrate / estimate / bench / gen front end for the library.
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "specbound/bench.hpp"
#include "specbound/calibration.hpp"
#include "specbound/dense_kernels.hpp"
#include "specbound/errors.hpp"
#include "specbound/estimators.hpp"
#include "specbound/io.hpp"
#include "specbound/zoo.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace specbound;

namespace {

constexpr const char* kVersion = "0.1.0";
// cache is only valid for the calibrator shipped with it
constexpr int kRhoGrid = 2000;       // g_cb_sup scan resolution
constexpr double kBisectTol = 1e-4;  // theta bisection width

enum { kFail = 1, kUsage = 2, kCapability = 3, kDegenerate = 4, kCollision = 5 };

struct collision_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

core::MatrixFormat format_for(const std::string& path, const std::string& override_fmt) {
  if (override_fmt == "csv") return core::MatrixFormat::csv;
  if (override_fmt == "spbd") return core::MatrixFormat::spbd;
  return ends_with(path, ".csv") ? core::MatrixFormat::csv : core::MatrixFormat::spbd;
}

const char* method_str(cal::Method m) {
  switch (m) {
    case cal::Method::closed_form: return "closed_form";
    case cal::Method::numeric_inversion: return "numeric_inversion";
    default: return "oracle_mc";
  }
}

est::EstimatorKind parse_kind(const std::string& name, int k) {
  if (name == "vanilla") {
    if (k < 1) throw contract_error("vanilla: k >= 1 required");
    return est::EstimatorKind::vanilla(k);
  }
  if (name == "dixon") return est::EstimatorKind::dixon();
  if (name == "counterbalance" || name == "cb") return est::EstimatorKind::counterbalance();
  throw contract_error("unknown estimator kind '" + name + "'");
}

// ---------------------------------------------------------------- calibration cache

fs::path cache_path() {
  std::error_code ec;
  fs::path exe = fs::read_symlink("/proc/self/exe", ec);
  return (ec ? fs::current_path() : exe.parent_path()) / "specbound_cache.json";
}

// Numeric inversion for Counterbalance repays its rho-sup scans from a JSON
// cache next to the binary; closed forms are cheaper than the file read.
cal::CalibrationEntry cached_theta(est::EstimatorKind kind, double delta) {
  if (kind.tag != est::EstimatorKind::Tag::counterbalance) return cal::theta_for_delta(kind, delta);
  fs::path path = cache_path();
  json cache;
  if (std::ifstream in(path); in) {
    try {
      in >> cache;
    } catch (const std::exception&) {
      cache = json();
    }
  }
  bool usable = cache.is_object() && cache.value("version", std::string()) == kVersion &&
                cache.value("rho_grid", 0) == kRhoGrid &&
                cache.value("bisect_tol", 0.0) == kBisectTol && cache["entries"].is_array();
  if (!usable)
    cache = json{{"version", kVersion},
                 {"rho_grid", kRhoGrid},
                 {"bisect_tol", kBisectTol},
                 {"entries", json::array()}};
  for (const auto& j : cache["entries"])
    if (j.value("kind", std::string()) == "counterbalance" &&
        std::fabs(j.value("delta", -1.0) - delta) < 1e-15) {
      cal::CalibrationEntry e;
      e.delta = delta;
      e.kind = kind;
      e.theta = j.at("theta").get<double>();
      e.method = cal::Method::numeric_inversion;
      return e;
    }
  cal::CalibrationEntry e = cal::theta_for_delta(kind, delta);
  cache["entries"].push_back(
      {{"kind", "counterbalance"}, {"delta", e.delta}, {"theta", e.theta}});
  if (std::ofstream out(path, std::ios::trunc); out) out << cache.dump(2) << '\n';
  return e;
}

// ---------------------------------------------------------------- calibrate

struct CalibrateArgs {
  std::vector<double> deltas;
  std::vector<std::string> kinds;
  int k = 3;
  bool json_out = false;
  std::string out_path;
};

int run_calibrate(const CalibrateArgs& a) {
  for (double d : a.deltas)
    if (!(d > 0.0 && d < 1.0)) throw contract_error("--delta must lie in (0, 1)");
  std::vector<std::string> kinds =
      a.kinds.empty() ? std::vector<std::string>{"counterbalance", "vanilla", "dixon"} : a.kinds;
  cal::CalibrationTable table;
  for (double d : a.deltas)
    for (const auto& name : kinds) table.entries.push_back(cached_theta(parse_kind(name, a.k), d));
  if (!a.out_path.empty()) {
    std::ofstream out(a.out_path, std::ios::trunc);
    if (!out) throw io_error("cannot write " + a.out_path);
    out << cal::to_json(table) << '\n';
  }
  if (a.json_out) {
    std::printf("%s\n", cal::to_json(table).c_str());
  } else {
    std::printf("%-16s %-10s %-14s %s\n", "kind", "delta", "theta", "method");
    for (const auto& e : table.entries)
      std::printf("%-16s %-10g %-14.6f %s\n", e.kind.name().c_str(), e.delta, e.theta,
                  method_str(e.method));
  }
  return 0;
}

// ---------------------------------------------------------------- matrix sources

struct SourceArgs {
  std::size_t hilbert_n = 0;
  std::string file_path;
  std::size_t frechet_n = 0;
  double frechet_scale = -0.01;
  bool no_adjoint = false;
};

struct Source {
  core::LinearOperator op;
  std::string desc;
};

Source resolve_source(const SourceArgs& s) {
  int count = (s.hilbert_n > 0) + (!s.file_path.empty() ? 1 : 0) + (s.frechet_n > 0);
  if (count != 1)
    throw contract_error("exactly one matrix source required (--hilbert | --file | --frechet)");
  Source src;
  if (s.hilbert_n > 0) {
    src.op = core::hilbert_operator(s.hilbert_n);
    src.desc = "hilbert " + std::to_string(s.hilbert_n);
  } else if (!s.file_path.empty()) {
    src.op = core::make_dense_operator(core::load_matrix(s.file_path, format_for(s.file_path, "")));
    src.desc = s.file_path;
  } else {
    src.op = core::frechet_expm_operator(s.frechet_n, s.frechet_scale);
    src.desc = "frechet n=" + std::to_string(s.frechet_n);
  }
  if (s.no_adjoint) {
    core::LinearOperator inner = src.op;
    src.op = core::LinearOperator(
        inner.rows(), inner.cols(),
        [inner](const double* x, double* y) { inner.apply(x, y); }, nullptr);
  }
  return src;
}

// ---------------------------------------------------------------- estimate

struct EstimateArgs {
  SourceArgs src;
  std::string kind = "counterbalance";
  int k = 3;
  double delta = 0.0;
  double theta = 0.0;
  bool have_delta = false, have_theta = false;
  std::uint64_t seed = 0;
  bool json_out = false;
};

int run_estimate(const EstimateArgs& a) {
  est::EstimatorKind kind = parse_kind(a.kind, a.k);
  double theta = 0.0;
  std::string provenance;
  if (a.have_theta && a.have_delta) throw contract_error("give --delta or --theta, not both");
  if (a.have_theta) {
    if (a.theta < 1.0) throw contract_error("--theta >= 1 required for an override");
    theta = a.theta;
    provenance = "override";
  } else if (a.have_delta) {
    if (!(a.delta > 0.0 && a.delta < 1.0)) throw contract_error("--delta must lie in (0, 1)");
    cal::CalibrationEntry e = cached_theta(kind, a.delta);
    theta = e.theta;
    provenance = method_str(e.method);
  } else {
    throw contract_error("either --delta or --theta is required");
  }
  Source src = resolve_source(a.src);
  est::EstimatorReport rep = est::run(src.op, kind, theta, {a.seed, 0});
  if (a.json_out) {
    json j{{"kind", kind.name()},
           {"value", rep.value},
           {"theta", rep.theta},
           {"theta_provenance", provenance},
           {"matvecs", rep.matvec_count},
           {"sequential_depth", rep.sequential_depth},
           {"seed", a.seed},
           {"rows", src.op.rows()},
           {"cols", src.op.cols()},
           {"source", src.desc}};
    if (a.have_delta) j["delta"] = a.delta;
    std::printf("%s\n", j.dump(2).c_str());
  } else {
    std::printf("%-18s %.17g\n", "value", rep.value);
    std::printf("%-18s %s\n", "kind", kind.name().c_str());
    std::printf("%-18s %.10g (%s)\n", "theta", rep.theta, provenance.c_str());
    if (a.have_delta) std::printf("%-18s %g\n", "delta", a.delta);
    std::printf("%-18s %d\n", "matvecs", rep.matvec_count);
    std::printf("%-18s %d\n", "sequential_depth", rep.sequential_depth);
    std::printf("%-18s %llu\n", "seed", static_cast<unsigned long long>(a.seed));
    std::printf("%-18s %s (%zu x %zu)\n", "source", src.desc.c_str(), src.op.rows(),
                src.op.cols());
  }
  return 0;
}

// ---------------------------------------------------------------- gen

struct GenArgs {
  std::vector<double> sv;
  std::string shape;
  std::uint64_t seed = 1;
  std::string out;
  std::string format;
  bool json_out = false;
};

int run_gen(const GenArgs& a) {
  core::SpectrumSpec spec;
  spec.singular_values = a.sv;
  auto x = a.shape.find('x');
  if (x == std::string::npos) throw contract_error("--shape must look like 100x100");
  try {
    spec.rows = std::stoull(a.shape.substr(0, x));
    spec.cols = std::stoull(a.shape.substr(x + 1));
  } catch (const std::exception&) {
    throw contract_error("--shape must look like 100x100");
  }
  spec.validate();
  core::DenseMatrix m = core::gen_synthetic_dense(spec, a.seed);
  core::save_matrix(m, a.out, format_for(a.out, a.format));
  core::GroundTruth t = core::dense_svd(m);  // measured, not the requested spectrum
  json side{{"spectral_norm", t.spectral_norm},
            {"frobenius_norm", t.frobenius_norm},
            {"effective_rank", t.effective_rank},
            {"singular_values", t.singular_values}};
  std::string side_path = a.out + ".json";
  std::ofstream out(side_path, std::ios::trunc);
  if (!out) throw io_error("cannot write " + side_path);
  out << side.dump(2) << '\n';
  if (a.json_out) {
    std::printf("%s\n", side.dump(2).c_str());
  } else {
    std::printf("%-18s %s (%zu x %zu)\n", "matrix", a.out.c_str(), m.rows, m.cols);
    std::printf("%-18s %s\n", "sidecar", side_path.c_str());
    std::printf("%-18s %.10g\n", "spectral_norm", t.spectral_norm);
    std::printf("%-18s %.6g\n", "effective_rank", t.effective_rank);
  }
  return 0;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
  std::string config_path;
  std::string out_dir_override;
  bool full = false, force = false, json_out = false;
  int workers = 0;
  std::vector<std::string> matrix_filter;
  bool have_seed = false;
  std::uint64_t seed_override = 0;
};

struct MatrixEntry {
  std::string id;
  core::LinearOperator op;
  core::GroundTruth truth;
  std::size_t n_trials_override = 0;
};

core::GroundTruth truth_from_json(const json& j) {
  core::GroundTruth t;
  t.spectral_norm = j.at("spectral_norm").get<double>();
  t.frobenius_norm = j.at("frobenius_norm").get<double>();
  t.effective_rank = j.at("effective_rank").get<double>();
  if (j.contains("singular_values"))
    t.singular_values = j.at("singular_values").get<std::vector<double>>();
  return t;
}

MatrixEntry build_matrix(const json& j) {
  MatrixEntry e;
  e.id = j.at("id").get<std::string>();
  std::string type = j.at("type").get<std::string>();
  if (type == "hilbert") {
    core::DenseMatrix m = core::hilbert_matrix(j.at("n").get<std::size_t>());
    e.truth = core::dense_svd(m);
    e.op = core::make_dense_operator(std::move(m));
  } else if (type == "synthetic") {
    core::SpectrumSpec spec;
    spec.singular_values = j.at("sv").get<std::vector<double>>();
    spec.rows = j.at("rows").get<std::size_t>();
    spec.cols = j.at("cols").get<std::size_t>();
    auto [op, truth] = core::gen_synthetic(spec, j.value("seed", std::uint64_t{1}));
    e.op = std::move(op);
    e.truth = std::move(truth);
  } else if (type == "frechet") {
    std::size_t n = j.at("n").get<std::size_t>();
    double scale = j.value("scale", -0.01);
    e.op = core::frechet_expm_operator(n, scale);
    e.truth = core::frechet_ground_truth(n, scale);
  } else if (type == "file") {
    std::string path = j.at("path").get<std::string>();
    core::DenseMatrix m = core::load_matrix(path, format_for(path, ""));
    std::string side_path = path + ".json";
    if (std::ifstream side(side_path); side) {
      json sj;
      side >> sj;
      e.truth = truth_from_json(sj);
    } else {
      e.truth = core::dense_svd(m);
    }
    e.op = core::make_dense_operator(std::move(m));
  } else {
    throw contract_error("matrix '" + e.id + "': unknown type '" + type + "'");
  }
  if (j.contains("n_trials")) e.n_trials_override = j.at("n_trials").get<std::size_t>();
  return e;
}

struct EstEntry {
  est::EstimatorKind kind;
  double theta = 1.0;
  std::string provenance;
};

int run_bench(const BenchArgs& a) {
  std::ifstream in(a.config_path);
  if (!in) throw io_error("cannot open config " + a.config_path);
  json cfg;
  try {
    in >> cfg;
  } catch (const std::exception& ex) {
    throw contract_error(std::string("config parse: ") + ex.what());
  }

  std::string out_dir =
      a.out_dir_override.empty() ? cfg.value("output_dir", std::string("bench_out")) : a.out_dir_override;
  std::size_t n_trials = a.full ? 1000000 : cfg.value("n_trials", std::size_t{100000});
  double delta = cfg.value("delta", 0.05);
  std::uint64_t seed = a.have_seed ? a.seed_override : cfg.value("seed", std::uint64_t{1});
  int workers =
      a.workers > 0 ? a.workers : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  bool histograms = cfg.value("histograms", false);
  std::size_t hist_bins = cfg.value("histogram_bins", std::size_t{60});

  if (!cfg.contains("matrices") || !cfg["matrices"].is_array() || cfg["matrices"].empty())
    throw contract_error("config: 'matrices' array required");
  if (!cfg.contains("estimators") || !cfg["estimators"].is_array() || cfg["estimators"].empty())
    throw contract_error("config: 'estimators' array required");

  std::vector<std::string> ids;
  for (const auto& mj : cfg["matrices"]) {
    std::string id = mj.at("id").get<std::string>();
    for (const auto& seen : ids)
      if (seen == id) throw contract_error("config: duplicate matrix_id '" + id + "'");
    ids.push_back(id);
  }
  auto known = [&ids](const std::string& id) {
    for (const auto& k : ids)
      if (k == id) return true;
    return false;
  };
  for (const auto& f : a.matrix_filter)
    if (!known(f)) throw contract_error("unknown matrix_id '" + f + "'");

  std::vector<int> conv_budgets;
  std::vector<std::string> conv_ids;
  std::size_t conv_trials = 1000;
  double conv_delta = delta;
  if (cfg.contains("convergence")) {
    const json& cj = cfg["convergence"];
    conv_budgets = cj.at("budgets").get<std::vector<int>>();
    conv_ids = cj.value("matrices", ids);
    conv_trials = cj.value("n_trials", std::size_t{1000});
    conv_delta = cj.value("delta", delta);
    for (const auto& id : conv_ids)
      if (!known(id)) throw contract_error("unknown matrix_id '" + id + "' in convergence block");
  }

  fs::path dir(out_dir);
  if (fs::exists(dir) && !a.force)
    throw collision_error("output directory '" + out_dir + "' exists (rerun with --force)");
  fs::create_directories(dir);

  std::vector<EstEntry> ests;
  for (const auto& ej : cfg["estimators"]) {
    EstEntry e;
    e.kind = parse_kind(ej.at("kind").get<std::string>(), ej.value("k", 3));
    if (ej.contains("theta")) {
      e.theta = ej.at("theta").get<double>();
      e.provenance = "override";
    } else {
      cal::CalibrationEntry ce = cached_theta(e.kind, delta);
      e.theta = ce.theta;
      e.provenance = method_str(ce.method);
    }
    ests.push_back(e);
  }

  auto listed = [](const std::vector<std::string>& v, const std::string& id) {
    for (const auto& x : v)
      if (x == id) return true;
    return false;
  };

  std::vector<bench::BenchSummary> summaries;
  for (const auto& mj : cfg["matrices"]) {
    std::string id = mj.at("id").get<std::string>();
    if (!a.matrix_filter.empty() && !listed(a.matrix_filter, id)) continue;
    MatrixEntry m = build_matrix(mj);
    std::size_t N = m.n_trials_override ? m.n_trials_override : n_trials;
    for (const auto& e : ests) {
      std::fprintf(stderr, "bench: %s / %s (N=%zu)...\n", id.c_str(), e.kind.name().c_str(), N);
      bench::TrialBatch batch = bench::run_batch(m.op, m.truth, e.kind, e.theta, N, seed, workers);
      batch.matrix_id = id;
      summaries.push_back(bench::summarize(batch));
      if (histograms)
        bench::export_histogram(bench::histogram_data(batch, hist_bins),
                                (dir / ("hist_" + id + "_" + e.kind.name() + ".csv")).string());
    }
    if (!conv_budgets.empty() && listed(conv_ids, id)) {
      for (const auto& e : ests) {
        std::fprintf(stderr, "bench: %s / %s convergence...\n", id.c_str(), e.kind.name().c_str());
        auto pts = bench::convergence_curve(m.op, m.truth, e.kind, conv_budgets, conv_delta,
                                            conv_trials, seed, workers);
        std::string path = (dir / ("convergence_" + id + "_" + e.kind.name() + ".csv")).string();
        std::ofstream out(path, std::ios::trunc);
        if (!out) throw io_error("cannot write " + path);
        out << "budget,kind,theta,mean,std\n";
        char buf[160];
        for (const auto& p : pts) {
          std::snprintf(buf, sizeof buf, "%d,%s,%.17g,%.17g,%.17g\n", p.budget, p.kind.c_str(),
                        p.theta_used, p.mean, p.std_dev);
          out << buf;
        }
      }
    }
  }

  std::string fmt = cfg.value("format", std::string("csv"));
  if (fmt != "csv" && fmt != "json") throw contract_error("config: format must be csv or json");
  bench::export_results(summaries, (dir / (fmt == "csv" ? "summary.csv" : "summary.json")).string(),
                        fmt == "csv" ? bench::ExportFormat::csv : bench::ExportFormat::json);

  // worker count deliberately left out: outputs are schedule-independent
  json rc{{"version", kVersion},
          {"config", cfg},
          {"resolved",
           {{"output_dir", out_dir},
            {"n_trials", n_trials},
            {"delta", delta},
            {"seed", seed},
            {"full", a.full},
            {"matrix_filter", a.matrix_filter}}},
          {"trial_streams", "trial i uses stream i of the seed; redraw r moves to stream r*N + i"},
          {"convergence_theta_rule",
           "vanilla: k = m, theta = sqrt(2/pi) * delta^(-1/m); dixon/counterbalance: r = m/3 "
           "replicates, max over replicates, theta solves bound(theta) = delta^(1/r)"}};
  json est_arr = json::array();
  for (const auto& e : ests)
    est_arr.push_back(
        {{"kind", e.kind.name()}, {"theta", e.theta}, {"theta_provenance", e.provenance}});
  rc["estimators"] = est_arr;
  {
    std::string path = (dir / "run_config.json").string();
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw io_error("cannot write " + path);
    out << rc.dump(2) << '\n';
  }

  if (a.json_out) {
    std::printf("%s\n", bench::summaries_to_json(summaries).c_str());
  } else {
    std::printf("%-12s %-16s %-10s %-10s %-10s %-10s %s\n", "matrix", "kind", "theta",
                "delta_real", "mae", "mean", "std");
    for (const auto& s : summaries)
      std::printf("%-12s %-16s %-10.5g %-10.5g %-10.5g %-10.5g %.5g\n", s.matrix_id.c_str(),
                  s.kind.c_str(), s.theta, s.delta_real, s.mae, s.mean, s.std_dev);
    std::printf("results in %s\n", out_dir.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"probabilistic upper bounds on the spectral norm of implicit matrices"};
  app.require_subcommand(1);

  CalibrateArgs cal_args;
  CLI::App* cal_cmd = app.add_subcommand("calibrate", "turn target delta into theta per estimator");
  cal_cmd->add_option("--delta", cal_args.deltas, "target underestimation probabilities")
      ->required()
      ->delimiter(',');
  cal_cmd->add_option("--kind", cal_args.kinds, "estimator kinds (default: all three)")
      ->delimiter(',');
  cal_cmd->add_option("--k", cal_args.k, "matvec count for vanilla (default 3)");
  cal_cmd->add_flag("--json", cal_args.json_out, "machine-readable output");
  cal_cmd->add_option("--out", cal_args.out_path, "also write the table as JSON to this path");

  EstimateArgs est_args;
  CLI::App* est_cmd = app.add_subcommand("estimate", "one-shot upper bound on one matrix");
  est_cmd->add_option("--hilbert", est_args.src.hilbert_n, "Hilbert matrix of this order");
  est_cmd->add_option("--file", est_args.src.file_path, "matrix file (.csv or .spbd)");
  est_cmd->add_option("--frechet", est_args.src.frechet_n,
                      "Frechet-derivative operator of exp(H), grid side n");
  est_cmd->add_option("--scale", est_args.src.frechet_scale, "H scale (default -0.01)");
  est_cmd->add_flag("--no-adjoint", est_args.src.no_adjoint,
                    "treat the source as forward-only (no adjoint matvecs)");
  est_cmd->add_option("--kind", est_args.kind, "vanilla | dixon | counterbalance");
  est_cmd->add_option("--k", est_args.k, "matvec count for vanilla (default 3)");
  CLI::Option* est_delta = est_cmd->add_option("--delta", est_args.delta, "target probability");
  CLI::Option* est_theta = est_cmd->add_option("--theta", est_args.theta, "scaling override");
  est_cmd->add_option("--seed", est_args.seed, "RNG seed (default 0)");
  est_cmd->add_flag("--json", est_args.json_out, "machine-readable output");

  BenchArgs bench_args;
  CLI::App* bench_cmd = app.add_subcommand("bench", "run a benchmark campaign from a JSON config");
  bench_cmd->add_option("--config", bench_args.config_path, "campaign config (JSON)")->required();
  bench_cmd->add_option("-o,--output-dir", bench_args.out_dir_override, "override output directory");
  bench_cmd->add_flag("--full", bench_args.full, "run 10^6 trials per cell");
  bench_cmd->add_flag("--force", bench_args.force, "overwrite an existing output directory");
  bench_cmd->add_option("--workers", bench_args.workers, "worker threads (default: logical cores)");
  bench_cmd->add_option("--matrix", bench_args.matrix_filter, "run only these matrix ids")
      ->delimiter(',');
  CLI::Option* bench_seed =
      bench_cmd->add_option("--seed", bench_args.seed_override, "override the config seed");
  bench_cmd->add_flag("--json", bench_args.json_out, "print summaries as JSON");

  GenArgs gen_args;
  CLI::App* gen_cmd = app.add_subcommand("gen", "write a synthetic matrix with known spectrum");
  gen_cmd->add_option("--sv", gen_args.sv, "nonincreasing positive singular values")
      ->required()
      ->delimiter(',');
  gen_cmd->add_option("--shape", gen_args.shape, "rows x cols, e.g. 100x100")->required();
  gen_cmd->add_option("--seed", gen_args.seed, "generation seed (default 1)");
  gen_cmd->add_option("-o,--out", gen_args.out, "output path (.csv or .spbd)")->required();
  gen_cmd->add_option("--format", gen_args.format, "csv | spbd (default: by extension)")
      ->check(CLI::IsMember({"csv", "spbd"}));
  gen_cmd->add_flag("--json", gen_args.json_out, "machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  est_args.have_delta = est_delta->count() > 0;
  est_args.have_theta = est_theta->count() > 0;
  bench_args.have_seed = bench_seed->count() > 0;

  try {
    if (cal_cmd->parsed()) return run_calibrate(cal_args);
    if (est_cmd->parsed()) return run_estimate(est_args);
    if (bench_cmd->parsed()) return run_bench(bench_args);
    if (gen_cmd->parsed()) return run_gen(gen_args);
    return kUsage;
  } catch (const collision_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kCollision;
  } catch (const degenerate_draw_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kDegenerate;
  } catch (const capability_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kCapability;
  } catch (const contract_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  } catch (const io_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kFail;
  }
}
