// Copyright (c) 2026 the diqkd authors.
// Distributed under the MIT License (see LICENSE).

#ifndef DIQKD_ISCORE_HPP
#define DIQKD_ISCORE_HPP

#include "diqkd/circuit.hpp"
#include "diqkd/entropy.hpp"

#include <array>

namespace diqkd {

// An I-score is the affine Bell functional read off the dual of a
// behavior-constrained entropy solve.  Writing
//
//   I(P) = sum_k lambda_k P(a,b|x,y)     (canonical event order),
//
// the solve's certificate is the global statement  H(P) >= offset - I(P):
// distributions with a lower score carry more certified entropy.
//
// The characteristic points of the score's range order as
//
//   i_q1 <= i_c1 <= i_c2 <= i_q2 <= i_max,
//
// where [i_c1, i_c2] is the exact range over deterministic local strategies,
// [i_q1, i_q2] encloses the quantum range (level-2 moment relaxation, so the
// interval is an outer bound), and i_max is the exact maximum over all
// normalized conditional tables, signaling ones included.
struct IScore {
  std::array<double, 16> lambda{};
  double offset = 0.0;

  double i_c1 = 0.0, i_c2 = 0.0;  // deterministic-local extremes
  double i_q1 = 0.0, i_q2 = 0.0;  // quantum range enclosure
  double i_max = 0.0;             // maximum over all normalized tables

  bool bounds_set = false;        // characteristic points filled in
  bool bounds_certified = false;  // quantum enclosure from converged solves
};

// Reads the affine certificate out of a behavior-constrained bound.  The
// characteristic points are left unset; call iscore_bounds to fill them.
// Throws if the bound carries no behavior certificate (split mode,
// score-only constraints, failed solves).
IScore extract_iscore(const EntropyBound& bound);

// Fills the characteristic points of the score: local extremes by
// enumerating the 16 deterministic strategies, the quantum enclosure by a
// pair of moment-relaxation solves, i_max by per-setting vertex selection.
// If a solve fails to converge the quantum enclosure degrades to the
// all-distribution extremes (still an enclosure) and bounds_certified stays
// false.
IScore iscore_bounds(IScore score, const SdpOptions& options = {});

// I(P) = <lambda, P> over the sixteen test components.
double iscore_value(const IScore& score, const Behavior& behavior);

// Certified entropy at a behavior: offset - I(P).
double iscore_entropy(const IScore& score, const Behavior& behavior);

}  // namespace diqkd

#endif
