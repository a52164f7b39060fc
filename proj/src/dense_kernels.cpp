#include "specbound/dense_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace specbound::core {

DenseMatrix matmul(const DenseMatrix& A, const DenseMatrix& B) {
  if (A.cols != B.rows) throw contract_error("matmul: inner dimensions differ");
  DenseMatrix C(A.rows, B.cols);
  const std::size_t n = A.rows, k = A.cols, m = B.cols;
  for (std::size_t i = 0; i < n; ++i) {
    double* ci = C.a.data() + i * m;
    for (std::size_t p = 0; p < k; ++p) {
      double aip = A.a[i * k + p];
      if (aip == 0.0) continue;
      const double* bp = B.a.data() + p * m;
      for (std::size_t j = 0; j < m; ++j) ci[j] += aip * bp[j];
    }
  }
  return C;
}

DenseMatrix transpose(const DenseMatrix& A) {
  DenseMatrix T(A.cols, A.rows);
  for (std::size_t i = 0; i < A.rows; ++i)
    for (std::size_t j = 0; j < A.cols; ++j) T.at(j, i) = A.at(i, j);
  return T;
}

DenseMatrix identity(std::size_t n) {
  DenseMatrix I(n, n);
  for (std::size_t i = 0; i < n; ++i) I.at(i, i) = 1.0;
  return I;
}

double norm1(const DenseMatrix& A) {
  double best = 0.0;
  for (std::size_t j = 0; j < A.cols; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < A.rows; ++i) s += std::fabs(A.at(i, j));
    best = std::max(best, s);
  }
  return best;
}

double frobenius(const DenseMatrix& A) {
  double s = 0.0;
  for (double x : A.a) s += x * x;
  return std::sqrt(s);
}

DenseMatrix householder_q(const DenseMatrix& A) {
  const std::size_t m = A.rows, k = A.cols;
  if (m < k) throw contract_error("householder_q: need rows >= cols");
  DenseMatrix R = A;
  std::vector<std::vector<double>> vs;  // reflectors
  vs.reserve(k);
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<double> v(m - j);
    double nrm = 0.0;
    for (std::size_t i = j; i < m; ++i) {
      v[i - j] = R.at(i, j);
      nrm += v[i - j] * v[i - j];
    }
    nrm = std::sqrt(nrm);
    double alpha = v[0] >= 0 ? -nrm : nrm;
    v[0] -= alpha;
    double vnorm2 = 0.0;
    for (double x : v) vnorm2 += x * x;
    if (vnorm2 > 0.0) {
      for (std::size_t c = j; c < k; ++c) {
        double proj = 0.0;
        for (std::size_t i = j; i < m; ++i) proj += v[i - j] * R.at(i, c);
        proj *= 2.0 / vnorm2;
        for (std::size_t i = j; i < m; ++i) R.at(i, c) -= proj * v[i - j];
      }
    }
    vs.push_back(std::move(v));
  }
  // Q = H_0 ... H_{k-1} applied to the first k columns of I, then sign-fix
  // columns so diag(R) > 0 (Haar-correct distribution for Gaussian input).
  DenseMatrix Q(m, k);
  for (std::size_t j = 0; j < k; ++j) Q.at(j, j) = 1.0;
  for (std::size_t jj = k; jj-- > 0;) {
    const auto& v = vs[jj];
    double vnorm2 = 0.0;
    for (double x : v) vnorm2 += x * x;
    if (vnorm2 == 0.0) continue;
    for (std::size_t c = 0; c < k; ++c) {
      double proj = 0.0;
      for (std::size_t i = jj; i < m; ++i) proj += v[i - jj] * Q.at(i, c);
      proj *= 2.0 / vnorm2;
      for (std::size_t i = jj; i < m; ++i) Q.at(i, c) -= proj * v[i - jj];
    }
  }
  for (std::size_t j = 0; j < k; ++j) {
    if (R.at(j, j) < 0.0)
      for (std::size_t i = 0; i < m; ++i) Q.at(i, j) = -Q.at(i, j);
  }
  return Q;
}

DenseMatrix lu_solve(DenseMatrix A, DenseMatrix B) {
  if (A.rows != A.cols || A.rows != B.rows) throw contract_error("lu_solve: shape mismatch");
  const std::size_t n = A.rows, m = B.cols;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t i = col + 1; i < n; ++i)
      if (std::fabs(A.at(i, col)) > std::fabs(A.at(piv, col))) piv = i;
    if (A.at(piv, col) == 0.0) throw contract_error("lu_solve: singular matrix");
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(A.at(piv, j), A.at(col, j));
      for (std::size_t j = 0; j < m; ++j) std::swap(B.at(piv, j), B.at(col, j));
    }
    double d = A.at(col, col);
    for (std::size_t i = col + 1; i < n; ++i) {
      double f = A.at(i, col) / d;
      if (f == 0.0) continue;
      for (std::size_t j = col + 1; j < n; ++j) A.at(i, j) -= f * A.at(col, j);
      for (std::size_t j = 0; j < m; ++j) B.at(i, j) -= f * B.at(col, j);
    }
  }
  for (std::size_t col = n; col-- > 0;) {
    double d = A.at(col, col);
    for (std::size_t j = 0; j < m; ++j) {
      double s = B.at(col, j);
      for (std::size_t p = col + 1; p < n; ++p) s -= A.at(col, p) * B.at(p, j);
      B.at(col, j) = s / d;
    }
  }
  return B;
}

SvdResult jacobi_svd(const DenseMatrix& A, bool want_factors) {
  // work on W = A (or A^T so rows >= cols); singular values are column norms
  // after the one-sided sweeps converge.
  bool transposed = A.rows < A.cols;
  DenseMatrix W = transposed ? transpose(A) : A;
  const std::size_t m = W.rows, n = W.cols;
  DenseMatrix V = identity(n);

  auto col_dot = [&](std::size_t p, std::size_t q) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += W.at(i, p) * W.at(i, q);
    return s;
  };

  const double tol = 1e-12;
  const int max_sweeps = 60;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double app = col_dot(p, p), aqq = col_dot(q, q), apq = col_dot(p, q);
        if (std::fabs(apq) <= tol * std::sqrt(app * aqq) || apq == 0.0) continue;
        rotated = true;
        double tau = (aqq - app) / (2.0 * apq);
        double t = (tau >= 0 ? 1.0 : -1.0) / (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
        double c = 1.0 / std::sqrt(1.0 + t * t), s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          double wp = W.at(i, p), wq = W.at(i, q);
          W.at(i, p) = c * wp - s * wq;
          W.at(i, q) = s * wp + c * wq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          double vp = V.at(i, p), vq = V.at(i, q);
          V.at(i, p) = c * vp - s * vq;
          V.at(i, q) = s * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sv(n);
  std::vector<std::size_t> order(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += W.at(i, j) * W.at(i, j);
    sv[j] = std::sqrt(s);
    order[j] = j;
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sv[a] > sv[b]; });

  SvdResult out;
  out.singular_values.resize(n);
  for (std::size_t j = 0; j < n; ++j) out.singular_values[j] = sv[order[j]];
  if (want_factors) {
    DenseMatrix U(m, n), Vo(n, n);
    for (std::size_t j = 0; j < n; ++j) {
      std::size_t src = order[j];
      double inv = sv[src] > 0 ? 1.0 / sv[src] : 0.0;
      for (std::size_t i = 0; i < m; ++i) U.at(i, j) = W.at(i, src) * inv;
      for (std::size_t i = 0; i < n; ++i) Vo.at(i, j) = V.at(i, src);
    }
    if (transposed) {
      out.u = std::move(Vo);
      out.v = std::move(U);
    } else {
      out.u = std::move(U);
      out.v = std::move(Vo);
    }
    out.has_factors = true;
  }
  return out;
}

GroundTruth dense_svd(const DenseMatrix& m) {
  if (!m.finite()) throw contract_error("dense_svd: non-finite entries");
  if (std::min(m.rows, m.cols) > 2000)
    throw contract_error("dense_svd: matrix exceeds the 2000 desk-scale cap");
  SvdResult r = jacobi_svd(m, false);
  GroundTruth gt;
  gt.singular_values = r.singular_values;
  gt.spectral_norm = r.singular_values.empty() ? 0.0 : r.singular_values.front();
  double fro2 = 0.0;
  for (double s : r.singular_values) fro2 += s * s;
  gt.frobenius_norm = std::sqrt(fro2);
  gt.effective_rank = gt.spectral_norm > 0 ? fro2 / (gt.spectral_norm * gt.spectral_norm) : 1.0;
  return gt;
}

}  // namespace specbound::core
