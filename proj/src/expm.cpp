#include "specbound/expm.hpp"

#include <cmath>

namespace specbound::core {

DenseMatrix expm(const DenseMatrix& m) {
  if (m.rows != m.cols) throw contract_error("expm: matrix must be square");
  const std::size_t n = m.rows;

  // scale so ||A/2^s||_1 fits the degree-13 approximant's accuracy radius
  const double theta13 = 5.371920351148152;
  double nrm = norm1(m);
  int s = 0;
  if (nrm > theta13) s = static_cast<int>(std::ceil(std::log2(nrm / theta13)));
  DenseMatrix A = m;
  if (s > 0) {
    double f = std::ldexp(1.0, -s);
    for (double& x : A.a) x *= f;
  }

  static const double b[14] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                               1187353796428800.0,  129060195264000.0,   10559470521600.0,
                               670442572800.0,      33522128640.0,       1323241920.0,
                               40840800.0,          960960.0,            16380.0,
                               182.0,               1.0};

  DenseMatrix A2 = matmul(A, A);
  DenseMatrix A4 = matmul(A2, A2);
  DenseMatrix A6 = matmul(A2, A4);
  DenseMatrix I = identity(n);

  auto lincomb = [n](std::initializer_list<std::pair<double, const DenseMatrix*>> terms) {
    DenseMatrix R(n, n);
    for (auto& [c, M] : terms)
      for (std::size_t i = 0; i < n * n; ++i) R.a[i] += c * M->a[i];
    return R;
  };

  DenseMatrix W1 = lincomb({{b[13], &A6}, {b[11], &A4}, {b[9], &A2}});
  DenseMatrix W2 = lincomb({{b[7], &A6}, {b[5], &A4}, {b[3], &A2}, {b[1], &I}});
  DenseMatrix W = matmul(A6, W1);
  for (std::size_t i = 0; i < n * n; ++i) W.a[i] += W2.a[i];
  DenseMatrix U = matmul(A, W);

  DenseMatrix Z1 = lincomb({{b[12], &A6}, {b[10], &A4}, {b[8], &A2}});
  DenseMatrix V = matmul(A6, Z1);
  DenseMatrix Z2 = lincomb({{b[6], &A6}, {b[4], &A4}, {b[2], &A2}, {b[0], &I}});
  for (std::size_t i = 0; i < n * n; ++i) V.a[i] += Z2.a[i];

  DenseMatrix P(n, n), Q(n, n);
  for (std::size_t i = 0; i < n * n; ++i) {
    P.a[i] = V.a[i] + U.a[i];
    Q.a[i] = V.a[i] - U.a[i];
  }
  DenseMatrix E = lu_solve(std::move(Q), std::move(P));

  for (int i = 0; i < s; ++i) E = matmul(E, E);
  return E;
}

}  // namespace specbound::core
