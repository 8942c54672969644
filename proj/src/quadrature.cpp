// Copyright (c) 2026 the diqkd authors.
// Distributed under the MIT License (see LICENSE).

#include "diqkd/quadrature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace diqkd {

// Eigenvalue form of the Radau rule (Golub/Gautschi): take the symmetric
// Jacobi matrix of the Legendre recurrence on [-1, 1] and replace the last
// diagonal entry so that x = +1 becomes an eigenvalue.  Eigenvalues are the
// nodes; the weight of node i is beta_0 * (first eigenvector component)^2.
// The result is then mapped affinely onto [0, 1].
Quadrature gauss_radau(int m) {
  if (m < 1) throw std::invalid_argument("gauss_radau: m must be >= 1");

  if (m == 1) return {{1.0}, {1.0}};

  // Monic Legendre recurrence coefficients: alpha_k = 0, beta_k = k^2/(4k^2-1).
  std::vector<double> beta(m);
  beta[0] = 2.0;  // integral of the weight over [-1, 1]
  for (int k = 1; k < m; ++k) beta[k] = k * k / (4.0 * k * k - 1.0);

  // Modified last diagonal: alpha'_{m-1} = x0 - beta_{m-1} p_{m-2}(x0) / p_{m-1}(x0)
  // with monic p_k evaluated at the fixed node x0 = 1.
  const double x0 = 1.0;
  double p_prev = 0.0, p_cur = 1.0;  // p_{-1}, p_0
  for (int k = 0; k < m - 1; ++k) {
    double p_next = x0 * p_cur - (k >= 1 ? beta[k] : 0.0) * p_prev;
    p_prev = p_cur;
    p_cur = p_next;
  }
  const double alpha_last = x0 - beta[m - 1] * p_prev / p_cur;

  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
  for (int k = 1; k < m; ++k) {
    const double b = std::sqrt(beta[k]);
    J(k - 1, k) = b;
    J(k, k - 1) = b;
  }
  J(m - 1, m - 1) = alpha_last;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("gauss_radau: eigensolver failed");

  Quadrature q;
  q.t.resize(m);
  q.w.resize(m);
  for (int i = 0; i < m; ++i) {
    // Map node from [-1, 1] to [0, 1]; weights scale by the length ratio.
    q.t[i] = 0.5 * (es.eigenvalues()(i) + 1.0);
    q.w[i] = 0.5 * beta[0] * es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
  }
  // Eigen returns eigenvalues sorted ascending, so the fixed node is last;
  // pin it to remove the eigensolver's rounding.
  q.t[m - 1] = 1.0;
  return q;
}

}  // namespace diqkd
