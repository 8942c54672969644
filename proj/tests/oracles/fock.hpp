// Copyright (c) 2026 the diqkd authors.
// Distributed under the MIT License (see LICENSE).
//
// Test-only oracle: truncated Fock-space simulation of the displaced
// squeezed-vacuum circuit.  Deliberately independent of the closed forms in
// src/circuit.cpp; everything here is built from the Fock representation of
// the state and of the displacement operator, so agreement with the library
// is meaningful evidence.

#ifndef DIQKD_TESTS_ORACLES_FOCK_HPP
#define DIQKD_TESTS_ORACLES_FOCK_HPP

#include <Eigen/Dense>

#include <cmath>

namespace diqkd::oracle {

// Truncation dimension per mode.  With T <= 0.5 and |alpha| <= 1 the
// neglected tail of the squeezed state is below 1e-19, far under the 1e-10
// tolerance used by the tests.
inline constexpr int kFockDim = 40;

// Matrix of the displacement exp(alpha (adag - a)) in the truncated Fock
// basis, via scaling and squaring with a Taylor series.
inline Eigen::MatrixXd displacement_matrix(double alpha) {
  const int n = kFockDim;
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
  for (int m = 0; m + 1 < n; ++m) {
    K(m + 1, m) = alpha * std::sqrt(m + 1.0);   // adag part
    K(m, m + 1) = -alpha * std::sqrt(m + 1.0);  // -a part
  }
  int squarings = 0;
  double norm = K.cwiseAbs().colwise().sum().maxCoeff();
  while (norm > 0.5) {
    norm *= 0.5;
    ++squarings;
  }
  const double scale = std::ldexp(1.0, -squarings);
  Eigen::MatrixXd A = scale * K;
  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
  for (int k = 1; k <= 30; ++k) {
    term = (term * A) / k;
    result += term;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

// Coefficient matrix Psi with |psi> = sum_mn Psi(m, n) |m>|n> for a two-mode
// squeezed vacuum of transmittance T displaced by alpha on A and beta on B.
inline Eigen::MatrixXd displaced_squeezed_pair(double T, double alpha,
                                               double beta) {
  const int n = kFockDim;
  Eigen::MatrixXd Psi = Eigen::MatrixXd::Zero(n, n);
  const double c = std::sqrt(1.0 - T * T);
  double amp = c;
  for (int m = 0; m < n; ++m) {
    Psi(m, m) = amp;
    amp *= T;
  }
  return displacement_matrix(alpha) * Psi * displacement_matrix(beta).transpose();
}

// P(no click, no click) for one mode pair: POVM element (1-eta)^photons on
// each side.
inline double no_click_joint(double T, double eta, double alpha, double beta) {
  const Eigen::MatrixXd Psi = displaced_squeezed_pair(T, alpha, beta);
  const double r = 1.0 - eta;
  double p = 0.0;
  double wa = 1.0;
  for (int m = 0; m < kFockDim; ++m) {
    double wb = 1.0;
    for (int k = 0; k < kFockDim; ++k) {
      p += wa * wb * Psi(m, k) * Psi(m, k);
      wb *= r;
    }
    wa *= r;
  }
  return p;
}

// P(no click) on the A side alone (B traced out).
inline double no_click_marginal(double T, double eta, double alpha) {
  const Eigen::MatrixXd Psi = displaced_squeezed_pair(T, alpha, 0.0);
  const double r = 1.0 - eta;
  double p = 0.0;
  double wa = 1.0;
  for (int m = 0; m < kFockDim; ++m) {
    p += wa * Psi.row(m).squaredNorm();
    wa *= r;
  }
  return p;
}

}  // namespace diqkd::oracle

#endif
