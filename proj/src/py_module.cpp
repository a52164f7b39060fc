#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "specbound/bench.hpp"
#include "specbound/calibration.hpp"
#include "specbound/dense_kernels.hpp"
#include "specbound/estimators.hpp"
#include "specbound/expm.hpp"
#include "specbound/zoo.hpp"

namespace py = pybind11;
using namespace specbound;

namespace {

core::DenseMatrix matrix_from(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 2) throw contract_error("expected a 2-d array");
  core::DenseMatrix m(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)));
  std::copy(a.data(), a.data() + m.rows * m.cols, m.a.begin());
  return m;
}

py::array_t<double> matrix_to(const core::DenseMatrix& m) {
  py::array_t<double> out({m.rows, m.cols});
  std::copy(m.a.begin(), m.a.end(), out.mutable_data());
  return out;
}

py::dict truth_to(const core::GroundTruth& t) {
  py::dict d;
  d["spectral_norm"] = t.spectral_norm;
  d["frobenius_norm"] = t.frobenius_norm;
  d["effective_rank"] = t.effective_rank;
  d["singular_values"] = t.singular_values;
  return d;
}

est::EstimatorKind kind_from(const std::string& name, int k) {
  if (name == "vanilla") return est::EstimatorKind::vanilla(k);
  if (name == "dixon") return est::EstimatorKind::dixon();
  if (name == "counterbalance" || name == "cb") return est::EstimatorKind::counterbalance();
  throw contract_error("unknown estimator kind '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "matrix-free probabilistic spectral-norm upper bounds";

  py::register_exception<contract_error>(mod, "ContractError", PyExc_ValueError);
  py::register_exception<capability_error>(mod, "CapabilityError", PyExc_RuntimeError);
  py::register_exception<degenerate_draw_error>(mod, "DegenerateDrawError", PyExc_RuntimeError);

  py::class_<core::LinearOperator>(mod, "Operator")
      .def_property_readonly("rows", &core::LinearOperator::rows)
      .def_property_readonly("cols", &core::LinearOperator::cols)
      .def_property_readonly("adjoint_available", &core::LinearOperator::adjoint_available)
      .def("apply",
           [](const core::LinearOperator& op, const std::vector<double>& x) {
             return op.apply(x);
           })
      .def("apply_adjoint", [](const core::LinearOperator& op, const std::vector<double>& x) {
        return op.apply_adjoint(x);
      });

  mod.def("dense", [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    return core::make_dense_operator(matrix_from(a));
  });
  mod.def("hilbert", [](std::size_t n) { return core::hilbert_operator(n); });
  mod.def("hilbert_dense", [](std::size_t n) { return matrix_to(core::hilbert_matrix(n)); });
  mod.def(
      "synthetic",
      [](const std::vector<double>& sv, std::size_t rows, std::size_t cols, std::uint64_t seed) {
        core::SpectrumSpec spec{sv, rows, cols};
        spec.validate();
        auto [op, truth] = core::gen_synthetic(spec, seed);
        return py::make_tuple(op, truth_to(truth));
      },
      py::arg("sv"), py::arg("rows"), py::arg("cols"), py::arg("seed") = 1);
  mod.def("frechet", &core::frechet_expm_operator, py::arg("n"), py::arg("scale") = -0.01);
  mod.def(
      "frechet_truth",
      [](std::size_t n, double scale) { return truth_to(core::frechet_ground_truth(n, scale)); },
      py::arg("n"), py::arg("scale") = -0.01);

  mod.def("dense_svd",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
            return truth_to(core::dense_svd(matrix_from(a)));
          });
  mod.def("expm", [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    return matrix_to(core::expm(matrix_from(a)));
  });

  mod.def(
      "estimate",
      [](const core::LinearOperator& op, const std::string& kind, double theta,
         std::uint64_t seed, int k, std::uint64_t stream) {
        est::EstimatorReport r = est::run(op, kind_from(kind, k), theta, {seed, stream});
        py::dict d;
        d["value"] = r.value;
        d["theta"] = r.theta;
        d["matvecs"] = r.matvec_count;
        d["sequential_depth"] = r.sequential_depth;
        d["kind"] = r.kind.name();
        d["seed"] = r.seed;
        return d;
      },
      py::arg("op"), py::arg("kind"), py::arg("theta"), py::arg("seed") = 0, py::arg("k") = 3,
      py::arg("stream") = 0);
  mod.def(
      "power_ratio",
      [](const core::LinearOperator& op, std::uint64_t seed, std::uint64_t stream) {
        return est::power_ratio(op, {seed, stream});
      },
      py::arg("op"), py::arg("seed") = 0, py::arg("stream") = 0);

  mod.def("g_cb", &cal::g_cb, py::arg("theta"), py::arg("rho"));
  mod.def("g_cb_sup", &cal::g_cb_sup, py::arg("theta"));
  mod.def(
      "theta_for_delta",
      [](const std::string& kind, double delta, int k) {
        cal::CalibrationEntry e = cal::theta_for_delta(kind_from(kind, k), delta);
        py::dict d;
        d["theta"] = e.theta;
        d["method"] = e.method == cal::Method::closed_form ? "closed_form" : "numeric_inversion";
        return d;
      },
      py::arg("kind"), py::arg("delta"), py::arg("k") = 3);
  mod.def(
      "oracle_theta",
      [](const core::LinearOperator& op, double spectral_norm, const std::string& kind,
         double delta, std::size_t n_trials, std::uint64_t seed, int k) {
        core::GroundTruth t;
        t.spectral_norm = spectral_norm;
        return cal::oracle_theta(op, t, kind_from(kind, k), delta, n_trials, {seed, 0});
      },
      py::arg("op"), py::arg("spectral_norm"), py::arg("kind"), py::arg("delta"),
      py::arg("n_trials"), py::arg("seed") = 0, py::arg("k") = 3);

  mod.def(
      "run_batch",
      [](const core::LinearOperator& op, double spectral_norm, const std::string& kind,
         double theta, std::size_t n_trials, std::uint64_t seed, int workers, int k) {
        core::GroundTruth t;
        t.spectral_norm = spectral_norm;
        bench::TrialBatch batch =
            bench::run_batch(op, t, kind_from(kind, k), theta, n_trials, seed, workers);
        bench::BenchSummary s = bench::summarize(batch);
        py::dict d;
        d["values"] = batch.values;
        d["delta_real"] = s.delta_real;
        d["mae"] = s.mae;
        d["mean"] = s.mean;
        d["std"] = s.std_dev;
        return d;
      },
      py::arg("op"), py::arg("spectral_norm"), py::arg("kind"), py::arg("theta"),
      py::arg("n_trials"), py::arg("seed") = 0, py::arg("workers") = 1, py::arg("k") = 3);
}
