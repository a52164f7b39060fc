#pragma once
#include <atomic>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "specbound/errors.hpp"

namespace specbound::core {

struct DenseMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<double> a;  // row-major

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}

  double& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  bool finite() const {
    for (double x : a)
      if (!std::isfinite(x)) return false;
    return true;
  }
};

struct GroundTruth {
  double spectral_norm = 0.0;
  double frobenius_norm = 0.0;
  double effective_rank = 1.0;
  std::vector<double> singular_values;
};

struct SpectrumSpec {
  std::vector<double> singular_values;  // nonincreasing, positive
  std::size_t rows = 0, cols = 0;

  void validate() const {
    if (singular_values.empty()) throw contract_error("spectrum: empty singular value list");
    if (singular_values.size() > std::min(rows, cols))
      throw contract_error("spectrum: more singular values than min(rows, cols)");
    double prev = singular_values.front();
    for (double s : singular_values) {
      if (!(s > 0.0)) throw contract_error("spectrum: singular values must be positive");
      if (s > prev) throw contract_error("spectrum: singular values must be nonincreasing");
      prev = s;
    }
  }
  double effective_rank() const {
    double s1 = singular_values.front(), sum = 0.0;
    for (double s : singular_values) sum += s * s;
    return sum / (s1 * s1);
  }
};

// Matvec-only access to A. Type-erased so dense, implicit and instrumented
// operators share one calling convention.
class LinearOperator {
 public:
  using ApplyFn = std::function<void(const double*, double*)>;

  LinearOperator() = default;
  LinearOperator(std::size_t rows, std::size_t cols, ApplyFn fwd, ApplyFn adj)
      : rows_(rows), cols_(cols), fwd_(std::move(fwd)), adj_(std::move(adj)) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool adjoint_available() const { return static_cast<bool>(adj_); }

  // y = A x
  void apply(const double* x, double* y) const { fwd_(x, y); }
  // y = A^T x
  void apply_adjoint(const double* x, double* y) const {
    if (!adj_) throw capability_error("operator has no adjoint");
    adj_(x, y);
  }

  std::vector<double> apply(const std::vector<double>& x) const {
    if (x.size() != cols_) throw contract_error("apply: vector length != cols");
    std::vector<double> y(rows_);
    apply(x.data(), y.data());
    return y;
  }
  std::vector<double> apply_adjoint(const std::vector<double>& x) const {
    if (x.size() != rows_) throw contract_error("apply_adjoint: vector length != rows");
    std::vector<double> y(cols_);
    apply_adjoint(x.data(), y.data());
    return y;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  ApplyFn fwd_, adj_;
};

inline LinearOperator make_dense_operator(DenseMatrix m) {
  if (!m.finite()) throw contract_error("dense operator: non-finite entries");
  auto sp = std::make_shared<DenseMatrix>(std::move(m));
  std::size_t R = sp->rows, C = sp->cols;
  auto fwd = [sp, R, C](const double* x, double* y) {
    const double* a = sp->a.data();
    for (std::size_t i = 0; i < R; ++i) {
      double acc = 0.0;
      const double* row = a + i * C;
      for (std::size_t j = 0; j < C; ++j) acc += row[j] * x[j];
      y[i] = acc;
    }
  };
  auto adj = [sp, R, C](const double* x, double* y) {
    const double* a = sp->a.data();
    for (std::size_t j = 0; j < C; ++j) y[j] = 0.0;
    for (std::size_t i = 0; i < R; ++i) {
      const double* row = a + i * C;
      double xi = x[i];
      for (std::size_t j = 0; j < C; ++j) y[j] += row[j] * xi;
    }
  };
  return LinearOperator(R, C, fwd, adj);
}

// wraps an operator and counts applies; used to verify matvec accounting
struct MatvecCounter {
  std::shared_ptr<std::atomic<std::uint64_t>> applies =
      std::make_shared<std::atomic<std::uint64_t>>(0);
  std::shared_ptr<std::atomic<std::uint64_t>> adjoint_applies =
      std::make_shared<std::atomic<std::uint64_t>>(0);

  LinearOperator wrap(LinearOperator op) const {
    auto fcount = applies;
    auto acount = adjoint_applies;
    LinearOperator::ApplyFn adj;
    if (op.adjoint_available())
      adj = [op, acount](const double* x, double* y) {
        ++*acount;
        op.apply_adjoint(x, y);
      };
    return LinearOperator(
        op.rows(), op.cols(),
        [op, fcount](const double* x, double* y) {
          ++*fcount;
          op.apply(x, y);
        },
        adj);
  }
  std::uint64_t total() const { return *applies + *adjoint_applies; }
};

inline double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace specbound::core
