// Copyright (c) 2026 the diqkd authors.
// Distributed under the MIT License (see LICENSE).

#ifndef DIQKD_ENTROPY_HPP
#define DIQKD_ENTROPY_HPP

#include "diqkd/circuit.hpp"
#include "diqkd/sdp.hpp"
#include "diqkd/structure.hpp"

#include <array>
#include <vector>

namespace diqkd {

// Certified lower bounds on the conditional von Neumann entropy H(A_x|E)
// (and the joint variant H(A_x B_y|E)) of a device whose statistics are
// pinned down either by a full behavior, by its CHSH score, or by the value
// of an arbitrary linear functional of the behavior.
//
// The entropy is expressed through an m-node Gauss-Radau quadrature; each
// node contributes a noncommutative polynomial minimization which is relaxed
// to a moment-matrix SDP over the structure from structure.hpp.  The
// reported bound is  quadrature_constant(m) + (dual objective), which is a
// rigorous lower bound whenever the dual iterate is feasible; the duality
// gap quantifies how much is conceded relative to the primal value.

struct EntropyOptions {
  int m = 8;                            // quadrature nodes
  HierarchyMode mode = HierarchyMode::Block;
  std::vector<Word> monomials;          // A/B monomial basis; empty = ab_level1()
  double noisy_p = 0.0;                 // flip probability on the key outcome
  int objective_x = 1;                  // Alice observable carrying the key
  int objective_y = 1;                  // Bob observable in the joint variant
  int eve_level = 1;                    // Eve word length in the relaxation
  SdpOptions sdp{};
};

struct EntropyBound {
  // Reported lower bound in bits, clipped below at the analytic floor
  // max(h(p), 0): flipping the outcome with probability p guarantees that
  // much entropy regardless of the device.
  double value = 0.0;
  double raw = 0.0;           // unclipped bound; NaN when the solver failed
  double duality_gap = 0.0;   // worst |primal - dual| across solves, bits
  SdpStatus status = SdpStatus::NumericalFailure;  // worst across solves
  std::vector<SdpStatus> solve_status;             // one per interior-point solve
  // True when every solve reached optimality with duality gap at most 1e-6
  // bits, i.e. the value deserves to be called certified.
  bool certified = false;
  int iterations = 0;         // total interior-point iterations

  HierarchyMode mode = HierarchyMode::Block;
  bool joint = false;
  int m = 0;
  double preprocessing = 0.0;

  // Affine certificate in the behavior, available for behavior-constrained
  // bounds in block or full mode: for every behavior P' admitting a PSD
  // moment completion,
  //
  //   H  >=  offset - sum_k dual_multipliers[k] * P'_k
  //
  // with k running over the 16 test components in canonical event order
  // (Behavior::event_index).  Split mode deliberately does not export an
  // aggregate certificate; its per-block data is reported below instead.
  bool has_behavior_certificate = false;
  double offset = 0.0;
  std::array<double, 16> dual_multipliers{};

  // Affine certificate in the constrained score, available for score- or
  // CHSH-constrained bounds in block or full mode:
  //
  //   H(score s')  >=  score_offset + score_dual * s'.
  bool has_score_certificate = false;
  double score_offset = 0.0;
  double score_dual = 0.0;

  // Split mode only: per-node certificate data (offset_i, lambda_i) such
  // that node i's term is bounded by offset_i - <lambda_i, P'>.  Reported
  // for diagnostics; the mode is flagged non-certifying above.
  std::vector<double> block_offsets;
  std::vector<std::array<double, 16>> block_multipliers;
};

// sum_i w_i / (t_i ln 2) for the m-node Gauss-Radau rule; the additive
// constant of every reported bound.
double quadrature_constant(int m);

// Lower bound on H(A_x|E) given the full set of test-setting statistics.
// The behavior must be normalized and non-signaling.
EntropyBound h_cond_bound(const Behavior& b, const EntropyOptions& opt = {});

// Lower bound on H(A_x|E) given only the CHSH score, |chsh| <= 2 sqrt(2).
EntropyBound h_cond_bound(double chsh, const EntropyOptions& opt = {});

// Lower bound on H(A_x|E) subject to sum_k lambda_k P(a,b|x,y) = score,
// with lambda over the 16 test components in canonical event order.  The
// solver reports infeasibility if no quantum device attains the score.
EntropyBound h_score_bound(const std::array<double, 16>& lambda, double score,
                           const EntropyOptions& opt = {});

// Lower bound on the joint entropy H(A_x B_y|E) given the CHSH score.
EntropyBound h_joint_bound(double chsh, const EntropyOptions& opt = {});

}  // namespace diqkd

#endif
