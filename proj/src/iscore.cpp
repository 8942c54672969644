// Copyright (c) 2026 the diqkd authors.
// Distributed under the MIT License (see LICENSE).

#include "diqkd/iscore.hpp"

#include "diqkd/algebra.hpp"
#include "diqkd/sdp.hpp"
#include "diqkd/structure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace diqkd {

namespace {

// Coefficients of the score in the correlator basis
// {1, A1, A2, B1, B2, A1B1, A1B2, A2B1, A2B2}, via
// P(a,b|x,y) = (1 + (-1)^a <Ax> + (-1)^b <By> + (-1)^{a+b} <AxBy>) / 4.
std::array<double, 9> correlator_coefficients(
    const std::array<double, 16>& lambda) {
  std::array<double, 9> c{};
  for (int x = 1; x <= 2; ++x)
    for (int y = 1; y <= 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          const double l = lambda[Behavior::event_index(a, b, x, y)] / 4.0;
          const double sa = (a == 0) ? 1.0 : -1.0;
          const double sb = (b == 0) ? 1.0 : -1.0;
          c[kCgOne] += l;
          c[kCgA1 + (x - 1)] += sa * l;
          c[kCgB1 + (y - 1)] += sb * l;
          c[kCgA1B1 + (x - 1) * 2 + (y - 1)] += sa * sb * l;
        }
  return c;
}

// Certified lower bound on min over the level-2 moment relaxation of
// sum_j c_j <w_j> (j over the eight non-identity correlators).  Sets *ok
// when the solve converged with a tight gap.
double relaxation_minimum(const std::array<double, 9>& c,
                          const MomentStructure& structure,
                          const SdpOptions& options, bool* ok) {
  SdpProblem prob;
  prob.structure = &structure;
  const std::array<int, 9>& cg = structure.blocks[0].cg;
  prob.fixed.push_back({cg[kCgOne], 1.0});
  for (int j = kCgA1; j <= kCgA2B2; ++j)
    if (c[j] != 0.0) prob.objective.push_back({cg[j], c[j]});

  SdpResult res = solve_sdp(prob, options);
  *ok = res.ok() && res.gap <= 1e-6 * (1.0 + std::abs(res.dual));
  return c[kCgOne] + res.dual;
}

}  // namespace

IScore extract_iscore(const EntropyBound& bound) {
  if (!bound.has_behavior_certificate)
    throw std::invalid_argument(
        "iscore: bound carries no behavior certificate");
  IScore s;
  s.lambda = bound.dual_multipliers;
  s.offset = bound.offset;
  return s;
}

IScore iscore_bounds(IScore score, const SdpOptions& options) {
  const std::array<double, 16>& l = score.lambda;

  // Local extremes: deterministic strategies a(x), b(y).
  score.i_c1 = std::numeric_limits<double>::infinity();
  score.i_c2 = -std::numeric_limits<double>::infinity();
  for (int astrat = 0; astrat < 4; ++astrat)
    for (int bstrat = 0; bstrat < 4; ++bstrat) {
      double v = 0.0;
      for (int x = 1; x <= 2; ++x)
        for (int y = 1; y <= 2; ++y) {
          const int a = (astrat >> (x - 1)) & 1;
          const int b = (bstrat >> (y - 1)) & 1;
          v += l[Behavior::event_index(a, b, x, y)];
        }
      score.i_c1 = std::min(score.i_c1, v);
      score.i_c2 = std::max(score.i_c2, v);
    }

  // All-distribution extremes: each setting's conditional distribution is an
  // independent simplex, so the extremes pick one outcome pair per setting.
  double all_min = 0.0, all_max = 0.0;
  for (int x = 1; x <= 2; ++x)
    for (int y = 1; y <= 2; ++y) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -std::numeric_limits<double>::infinity();
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          const double v = l[Behavior::event_index(a, b, x, y)];
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
      all_min += lo;
      all_max += hi;
    }
  score.i_max = all_max;

  // Quantum enclosure from a pair of relaxation solves.
  const std::array<double, 9> c = correlator_coefficients(l);
  std::array<double, 9> neg;
  for (int j = 0; j < 9; ++j) neg[j] = -c[j];

  const MomentStructure structure =
      build_structure(ab_level2(), 1, HierarchyMode::Block, false, 1);
  bool ok_min = false, ok_max = false;
  const double lo = relaxation_minimum(c, structure, options, &ok_min);
  const double hi = -relaxation_minimum(neg, structure, options, &ok_max);

  if (ok_min && ok_max) {
    score.i_q1 = lo;
    score.i_q2 = hi;
    score.bounds_certified = true;
  } else {
    score.i_q1 = all_min;
    score.i_q2 = all_max;
    score.bounds_certified = false;
  }

  // The enclosure may only be widened, never narrowed, so snap it onto the
  // exact outer facts it must contain: the local interval and the
  // all-distribution interval.
  score.i_q1 = std::max(std::min(score.i_q1, score.i_c1), all_min);
  score.i_q2 = std::min(std::max(score.i_q2, score.i_c2), all_max);
  score.bounds_set = true;
  return score;
}

double iscore_value(const IScore& score, const Behavior& behavior) {
  const std::array<double, 16> p = behavior.test_components();
  double v = 0.0;
  for (int k = 0; k < 16; ++k) v += score.lambda[k] * p[k];
  return v;
}

double iscore_entropy(const IScore& score, const Behavior& behavior) {
  return score.offset - iscore_value(score, behavior);
}

}  // namespace diqkd
