// Copyright (c) 2026 the diqkd authors.
// Distributed under the MIT License (see LICENSE).

#ifndef DIQKD_SDP_HPP
#define DIQKD_SDP_HPP

#include "diqkd/structure.hpp"

#include <iosfwd>
#include <vector>

namespace diqkd {

// Minimize a linear function of moment-matrix entries subject to the blocks
// being positive semidefinite, selected moments being fixed to constants,
// and optional linear equality constraints:
//
//   min  sum_j c_j x_j
//   s.t. every structure block M_b(x) >= 0   (fixed moments substituted)
//        sum_j a_rj x_j = rhs_r              for every equality row
//
// The dual solution provides a certified lower bound together with the
// sensitivity of that bound to every fixed moment (see SdpResult).
struct SdpOptions {
  double tol = 1e-8;       // relative duality-gap target
  double feas_tol = 1e-9;  // residual-norm target
  int max_iter = 200;
  int threads = 0;          // 0 = library default thread count
  bool serial_schur = false;  // use the reference Schur kernel
  bool verbose = false;
};

enum class SdpStatus {
  Optimal,
  PrimalInfeasible,  // the fixed values / equalities admit no PSD completion
  Unbounded,         // the objective decreases without bound
  NumericalFailure,
};

struct LinearCombo {
  std::vector<std::pair<int, double>> terms;  // (moment id, coefficient)
  double rhs = 0.0;
};

struct SdpProblem {
  const MomentStructure* structure = nullptr;
  std::vector<std::pair<int, double>> fixed;      // (moment id, value)
  std::vector<std::pair<int, double>> objective;  // free moment ids only
  std::vector<LinearCombo> equalities;            // free moment ids only
};

struct SdpResult {
  SdpStatus status = SdpStatus::NumericalFailure;
  double primal = 0.0;  // objective at the returned moment vector
  double dual = 0.0;    // certified lower bound (when status == Optimal)
  double gap = 0.0;     // |primal - dual|
  int iterations = 0;

  std::vector<double> moments;  // by moment id, fixed values filled in

  // Sensitivity of the dual bound: for every moment id k the weight
  // w_k = <F_k, Z*> of its coefficient matrix against the optimal dual
  // variable.  For any alternative fixed values v' (same sparsity) the
  // quantity  -sum_k v'_k w_k + sum_r y_r rhs'_r  is still a valid lower
  // bound on the corresponding problem, which is what turns one solve into
  // an affine certificate.
  std::vector<double> dual_weight;     // by moment id
  std::vector<double> equality_dual;   // y, one entry per equality row

  bool ok() const { return status == SdpStatus::Optimal; }
};

SdpResult solve_sdp(const SdpProblem& problem, const SdpOptions& options = {});

// Writes the problem in a self-describing sparse text format (see README).
void dump_sdp(const SdpProblem& problem, std::ostream& out);

// Number of interior-point solves performed by this process.  Used by tests
// to assert that fast paths do not fall back to fresh solves.
long sdp_solve_count();

}  // namespace diqkd

#endif
