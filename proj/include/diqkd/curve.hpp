// Copyright (c) 2026 the diqkd authors.
// Distributed under the MIT License (see LICENSE).

#ifndef DIQKD_CURVE_HPP
#define DIQKD_CURVE_HPP

#include "diqkd/entropy.hpp"
#include "diqkd/iscore.hpp"

#include <vector>

namespace diqkd {

// Construction parameters for an entropy-versus-score curve.
struct CurveOptions {
  int knots = 12;          // solved grid points on [i_q1, i_c1]
  double smoothing = 1e-4; // bits shaved off the flat part; junction width
                           // is 2.5x this value in score units
  double grid_ratio = 1.4; // geometric densening of the grid toward i_c1
  double low_inset = 1e-3; // fraction of the range kept off the lower end,
                           // where the score constraint turns singular
  std::vector<double> extra_knots;  // additional score values to solve at
  EntropyOptions entropy{};         // per-knot solver configuration
};

// H(A|E) as a function of the I-score value: each knot is a certified
// entropy lower bound subject to a single linear constraint I(P) = knot
// score.  The knots are interpolated by a C^1 shape-preserving quadratic
// spline (Schumaker), the flat continuation inside the local set is
// down-shifted by a small epsilon, and a cubic junction joins the two with
// matching value and derivative.  Knot sets that lost convexity to solver
// noise are replaced by their lower convex hull before splining.
struct EntropyCurve {
  std::vector<double> knot_i;  // ascending solved grid
  std::vector<double> knot_h;  // entropy bits at the knots, after repair

  // quadratic pieces: on [piece_x[j], piece_x[j+1]],
  // h = piece_a[j] + piece_b[j]*dx + piece_c[j]*dx^2 with dx = i - piece_x[j]
  std::vector<double> piece_x;
  std::vector<double> piece_a, piece_b, piece_c;

  // cubic junction on [i_c1, i_c1 + 2.5*eps]
  double junction_end = 0.0;
  double jun_a = 0.0, jun_b = 0.0, jun_c = 0.0, jun_d = 0.0;

  double i_q1 = 0.0, i_c1 = 0.0, i_c2 = 0.0;
  double floor_h = 0.0;  // h(p), the local-set entropy floor
  double eps = 0.0;      // down-shift actually applied

  bool convexity_repaired = false;
  bool all_solves_ok = true;

  // Entropy bound at score i.  Below the first knot the first piece's
  // tangent extends the curve; past the junction the value is the constant
  // floor_h - eps.
  double value(double i) const;
  double derivative(double i) const;
};

// Solves the knot grid and assembles the curve.  The score must carry its
// characteristic points (iscore_bounds) and a nondegenerate nonlocal range
// i_q1 < i_c1.
EntropyCurve entropy_curve(const IScore& score, const CurveOptions& options);

}  // namespace diqkd

#endif
