#include "specbound/zoo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>

#include "specbound/dense_kernels.hpp"
#include "specbound/expm.hpp"
#include "specbound/rng.hpp"

namespace specbound::core {

DenseMatrix hilbert_matrix(std::size_t n) {
  if (n < 1) throw contract_error("hilbert: n >= 1 required");
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m.at(i, j) = 1.0 / static_cast<double>(i + j + 1);
  return m;
}

LinearOperator hilbert_operator(std::size_t n) { return make_dense_operator(hilbert_matrix(n)); }

DenseMatrix gen_synthetic_dense(const SpectrumSpec& spec, std::uint64_t seed) {
  spec.validate();
  const std::size_t k = spec.singular_values.size();
  est::GaussianStream g(est::RandomSource{seed, 0});
  DenseMatrix GU(spec.rows, k), GV(spec.cols, k);
  for (double& x : GU.a) x = g.next();
  for (double& x : GV.a) x = g.next();
  DenseMatrix U = householder_q(GU);
  DenseMatrix V = householder_q(GV);
  DenseMatrix A(spec.rows, spec.cols);
  for (std::size_t l = 0; l < k; ++l) {
    double s = spec.singular_values[l];
    for (std::size_t i = 0; i < spec.rows; ++i) {
      double su = s * U.at(i, l);
      if (su == 0.0) continue;
      for (std::size_t j = 0; j < spec.cols; ++j) A.at(i, j) += su * V.at(j, l);
    }
  }
  return A;
}

std::pair<LinearOperator, GroundTruth> gen_synthetic(const SpectrumSpec& spec, std::uint64_t seed) {
  DenseMatrix A = gen_synthetic_dense(spec, seed);
  GroundTruth gt;
  gt.singular_values = spec.singular_values;
  gt.spectral_norm = spec.singular_values.front();
  double fro2 = 0.0;
  for (double s : spec.singular_values) fro2 += s * s;
  gt.frobenius_norm = std::sqrt(fro2);
  gt.effective_rank = fro2 / (gt.spectral_norm * gt.spectral_norm);
  return {make_dense_operator(std::move(A)), gt};
}

namespace {

struct FrechetBasis {
  std::size_t n;
  std::vector<double> K;  // n x n, columns = eigenvectors of T_n (sine basis)
  std::vector<double> mu; // eigenvalues of T_n
};

FrechetBasis tridiag_eigens(std::size_t n) {
  FrechetBasis b;
  b.n = n;
  double h2 = static_cast<double>((n - 1) * (n - 1));
  b.mu.resize(n);
  b.K.assign(n * n, 0.0);
  double c = std::sqrt(2.0 / (n + 1));
  for (std::size_t k = 1; k <= n; ++k) {
    double ang = static_cast<double>(k) * M_PI / (n + 1);
    b.mu[k - 1] = (2.0 - 2.0 * std::cos(ang)) / h2;
    for (std::size_t j = 1; j <= n; ++j)
      b.K[(j - 1) * n + (k - 1)] = c * std::sin(static_cast<double>(j * k) * M_PI / (n + 1));
  }
  return b;
}

double sinhc(double d) {
  if (std::fabs(d) < 1e-4) {
    double d2 = d * d;
    return 1.0 + d2 / 6.0 + d2 * d2 / 120.0;
  }
  return std::sinh(d) / d;
}

// first divided difference of exp: (e^a - e^b)/(a - b), stable near a = b
double exp_divdiff(double a, double b) {
  double d = 0.5 * (a - b);
  return std::exp(0.5 * (a + b)) * sinhc(d);
}

struct FrechetFast {
  std::size_t n, n2, n4;
  std::vector<double> K;   // T_n eigenvector matrix
  std::vector<double> F;   // n2 x n2 divided-difference kernel in H's eigenbasis

  explicit FrechetFast(std::size_t n_, double scale) : n(n_), n2(n_ * n_), n4(n2 * n2) {
    FrechetBasis b = tridiag_eigens(n);
    K = std::move(b.K);
    std::vector<double> lam(n2);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t c = 0; c < n; ++c) lam[a * n + c] = scale * (b.mu[a] + b.mu[c]);
    F.resize(n2 * n2);
    for (std::size_t i = 0; i < n2; ++i)
      for (std::size_t j = 0; j < n2; ++j) F[i * n2 + j] = exp_divdiff(lam[i], lam[j]);
  }

  // out[i'] = sum_i K[i, i'] * in[i] along one tensor mode (transposed=false),
  // or out[i] = sum_i' K[i, i'] * in[i'] (transposed=true); stride selects the mode.
  void contract(const double* in, double* out, std::size_t stride, bool transposed) const {
    std::size_t outer_count = n4 / (n * stride);
    for (std::size_t o = 0; o < outer_count; ++o) {
      const double* ib = in + o * n * stride;
      double* ob = out + o * n * stride;
      for (std::size_t t = 0; t < n * stride; ++t) ob[t] = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double* is = ib + i * stride;
        for (std::size_t ip = 0; ip < n; ++ip) {
          double kv = transposed ? K[i * n + ip] : K[ip * n + i];
          if (kv == 0.0) continue;
          double* os = ob + ip * stride;
          for (std::size_t s = 0; s < stride; ++s) os[s] += kv * is[s];
        }
      }
    }
  }

  void apply(const double* x, double* y) const {
    std::vector<double> t0(x, x + n4), t1(n4);
    // into the eigenbasis: contract all four modes with K^T
    contract(t0.data(), t1.data(), n2 * n, true);
    contract(t1.data(), t0.data(), n2, true);
    contract(t0.data(), t1.data(), n, true);
    contract(t1.data(), t0.data(), 1, true);
    for (std::size_t i = 0; i < n4; ++i) t0[i] *= F[i];
    // and back out
    contract(t0.data(), t1.data(), n2 * n, false);
    contract(t1.data(), t0.data(), n2, false);
    contract(t0.data(), t1.data(), n, false);
    contract(t1.data(), y, 1, false);
  }
};

}  // namespace

DenseMatrix frechet_hamiltonian(std::size_t n, double scale) {
  if (n < 2) throw contract_error("frechet: n >= 2 required");
  std::size_t n2 = n * n;
  double h2 = static_cast<double>((n - 1) * (n - 1));
  DenseMatrix T(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    T.at(i, i) = 2.0 / h2;
    if (i + 1 < n) {
      T.at(i, i + 1) = -1.0 / h2;
      T.at(i + 1, i) = -1.0 / h2;
    }
  }
  DenseMatrix H(n2, n2);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t d = 0; d < n; ++d) {
          double v = 0.0;
          if (a == c) v += T.at(b, d);  // I (x) T
          if (b == d) v += T.at(a, c);  // T (x) I
          if (v != 0.0) H.at(a * n + b, c * n + d) = scale * v;
        }
  return H;
}

LinearOperator frechet_expm_operator(std::size_t n, double scale) {
  if (n < 2) throw contract_error("frechet: n >= 2 required");
  auto impl = std::make_shared<FrechetFast>(n, scale);
  std::size_t dim = impl->n4;
  auto fwd = [impl](const double* x, double* y) { impl->apply(x, y); };
  LinearOperator op(dim, dim, fwd, fwd);  // self-adjoint: H symmetric

  // verify the self-adjointness we just claimed instead of assuming it
  est::GaussianStream g(est::RandomSource{0xF2ECE7, 0});
  std::vector<double> u(dim), v(dim);
  for (auto& x : u) x = g.next();
  for (auto& x : v) x = g.next();
  std::vector<double> Au = op.apply(u), Av = op.apply(v);
  double lhs = dot(Au, v), rhs = dot(u, Av);
  if (std::fabs(lhs - rhs) > 1e-10 * std::max(1.0, std::fabs(lhs)))
    throw contract_error("frechet operator failed its self-adjointness check");
  return op;
}

GroundTruth frechet_ground_truth(std::size_t n, double scale) {
  if (n < 2) throw contract_error("frechet: n >= 2 required");
  FrechetBasis b = tridiag_eigens(n);
  std::size_t n2 = n * n;
  std::vector<double> lam(n2);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t c = 0; c < n; ++c) lam[a * n + c] = scale * (b.mu[a] + b.mu[c]);
  GroundTruth t;
  t.singular_values.reserve(n2 * n2);
  double fro2 = 0.0;
  for (std::size_t i = 0; i < n2; ++i)
    for (std::size_t j = 0; j < n2; ++j) {
      double f = exp_divdiff(lam[i], lam[j]);
      t.singular_values.push_back(f);
      fro2 += f * f;
    }
  std::sort(t.singular_values.begin(), t.singular_values.end(), std::greater<>());
  t.spectral_norm = t.singular_values.front();
  t.frobenius_norm = std::sqrt(fro2);
  t.effective_rank = fro2 / (t.spectral_norm * t.spectral_norm);
  return t;
}

LinearOperator frechet_block_reference(std::size_t n, double scale) {
  if (n < 2) throw contract_error("frechet: n >= 2 required");
  auto H = std::make_shared<DenseMatrix>(frechet_hamiltonian(n, scale));
  std::size_t n2 = H->rows, dim = n2 * n2;
  auto fwd = [H, n2](const double* x, double* y) {
    DenseMatrix B(2 * n2, 2 * n2);
    for (std::size_t i = 0; i < n2; ++i)
      for (std::size_t j = 0; j < n2; ++j) {
        B.at(i, j) = H->at(i, j);
        B.at(n2 + i, n2 + j) = H->at(i, j);
        B.at(i, n2 + j) = x[i * n2 + j];
      }
    DenseMatrix E = expm(B);
    for (std::size_t i = 0; i < n2; ++i)
      for (std::size_t j = 0; j < n2; ++j) y[i * n2 + j] = E.at(i, n2 + j);
  };
  return LinearOperator(dim, dim, fwd, fwd);
}

}  // namespace specbound::core
