// Copyright (c) 2026 the diqkd authors.
// Distributed under the MIT License (see LICENSE).

#ifndef DIQKD_OPTIMIZER_HPP
#define DIQKD_OPTIMIZER_HPP

#include "diqkd/circuit.hpp"
#include "diqkd/curve.hpp"
#include "diqkd/entropy.hpp"
#include "diqkd/iscore.hpp"

#include <cstdint>

namespace diqkd {

// Devetak-Winter split of the asymptotic rate at one operating point:
// certified entropy bound minus the error-correction cost H(A1|B0) on the
// preprocessed key pair.
struct RateSplit {
  double entropy = 0.0;  // certified H(A1|E) bound, bits
  double h_ab = 0.0;     // H(A1|B0) with preprocessing applied
  double rate = 0.0;     // entropy - h_ab exactly
  EntropyBound bound;    // the solve behind `entropy`
};

// Full-statistics block-bound rate at the given circuit and efficiency.
// The preprocessing probability is read from params.p: it enters the
// entropy objective and the key-pair statistics, never the constraint-side
// behavior.
RateSplit block_rate(const CircuitParams& params, double eta,
                     const EntropyOptions& options = {});

struct FirstOrderOptions {
  double tol = 1e-9;
  int max_evals = 2000;
};

// One inner optimization step on the circuit knobs (T and the five
// displacements; preprocessing held fixed): maximizes the local rate model
//
//   phi(x) = alpha * I(P(x)) - H(A1|B0)(P(x)),
//
// where alpha is the curve's slope at the current score value.  Both terms
// are closed-form in the circuit parameters, so the step performs no
// interior-point solve.  Returns the input unchanged when no improvement
// is found.
CircuitParams first_order_step(const CircuitParams& params, double eta,
                               const IScore& score, const EntropyCurve& curve,
                               const FirstOrderOptions& options = {});

struct OptimizeOptions {
  int iterations = 3;        // outer alternations
  EntropyOptions entropy{};  // certifying solve configuration
  CurveOptions curve{};      // slope-curve configuration (entropy field is
                             // overridden per iteration)
  FirstOrderOptions step{};
  int p_stages = 3;          // preprocessing grid refinement
  int p_points = 9;
  double p_shrink = 0.3;
  double p_max = 0.3;
  int p_rank_m = 4;          // quadrature size for ranking p candidates
  std::uint64_t seed = 1;    // seeds the CHSH-based multistart only
};

struct KeyrateResult {
  CircuitParams params;  // optimized circuit, preprocessing in params.p
  double eta = 0.0;
  double rate = 0.0;     // certified block rate at params
  double entropy = 0.0;  // its entropy part
  double h_ab = 0.0;     // its error-correction part
  EntropyBound bound;    // final certifying solve
  IScore score;          // extracted functional with characteristic points
  int iterations_done = 0;
  bool ok = false;       // final solve delivered a behavior certificate
};

// Alternates (certifying block solve -> score extraction -> first-order
// step -> preprocessing grid refinement) starting from the CHSH-optimal
// circuit, and returns the best operating point with its certified rate.
// On solver failure the best point found so far is reported with ok=false.
KeyrateResult optimize_keyrate(double eta, const OptimizeOptions& options = {});

}  // namespace diqkd

#endif
