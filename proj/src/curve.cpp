// Copyright (c) 2026 the diqkd authors.
// Distributed under the MIT License (see LICENSE).

#include "diqkd/curve.hpp"

#include "diqkd/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace diqkd {

namespace {

// Lower convex hull of (x, y) with strictly increasing x; returns the hull
// value at every input x.  Points above the hull are pulled down onto it,
// which is the conservative direction for a lower bound.
std::vector<double> lower_hull_values(const std::vector<double>& x,
                                      const std::vector<double>& y) {
  const int n = static_cast<int>(x.size());
  std::vector<int> hull;
  for (int i = 0; i < n; ++i) {
    while (hull.size() >= 2) {
      const int p = hull[hull.size() - 2], q = hull[hull.size() - 1];
      const double cross = (x[q] - x[p]) * (y[i] - y[p]) -
                           (y[q] - y[p]) * (x[i] - x[p]);
      if (cross <= 0.0)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(i);
  }
  std::vector<double> out(n);
  std::size_t seg = 0;
  for (int i = 0; i < n; ++i) {
    while (seg + 1 < hull.size() - 1 && x[hull[seg + 1]] <= x[i]) ++seg;
    const int p = hull[seg], q = hull[seg + 1 < hull.size() ? seg + 1 : seg];
    if (p == q || x[q] == x[p]) {
      out[i] = y[p];
    } else {
      const double t = (x[i] - x[p]) / (x[q] - x[p]);
      out[i] = y[p] + t * (y[q] - y[p]);
    }
  }
  return out;
}

// Shape-preserving C^1 quadratic interpolation (Schumaker): slopes from
// chord-length-weighted means, one extra breakpoint per interval where a
// single quadratic cannot match both end slopes.
void build_spline(const std::vector<double>& x, const std::vector<double>& y,
                  EntropyCurve* curve) {
  const int n = static_cast<int>(x.size());
  std::vector<double> delta(n - 1), len(n - 1), d(n);
  for (int i = 0; i + 1 < n; ++i) {
    const double h = x[i + 1] - x[i];
    delta[i] = (y[i + 1] - y[i]) / h;
    len[i] = std::hypot(h, y[i + 1] - y[i]);
  }
  for (int i = 1; i + 1 < n; ++i)
    d[i] = (delta[i - 1] * delta[i] > 0.0)
               ? (len[i - 1] * delta[i - 1] + len[i] * delta[i]) /
                     (len[i - 1] + len[i])
               : 0.0;
  d[0] = n > 2 ? 1.5 * delta[0] - 0.5 * d[1] : delta[0];
  d[n - 1] = n > 2 ? 1.5 * delta[n - 2] - 0.5 * d[n - 2] : delta[n - 2];

  auto push_piece = [curve](double x0, double a, double b, double c) {
    curve->piece_x.push_back(x0);
    curve->piece_a.push_back(a);
    curve->piece_b.push_back(b);
    curve->piece_c.push_back(c);
  };

  for (int i = 0; i + 1 < n; ++i) {
    const double h = x[i + 1] - x[i];
    if (std::abs(d[i] + d[i + 1] - 2.0 * delta[i]) <=
        1e-12 * (1.0 + std::abs(delta[i]))) {
      push_piece(x[i], y[i], d[i], (d[i + 1] - d[i]) / (2.0 * h));
      continue;
    }
    // extra breakpoint per the shape rules
    const double a = d[i] - delta[i], b = d[i + 1] - delta[i];
    double xi;
    if (a * b >= 0.0)
      xi = 0.5 * (x[i] + x[i + 1]);
    else if (std::abs(a) > std::abs(b))
      xi = x[i + 1] + a * h / (d[i + 1] - d[i]);
    else
      xi = x[i] + b * h / (d[i + 1] - d[i]);
    xi = std::min(std::max(xi, x[i] + 1e-12 * h), x[i + 1] - 1e-12 * h);
    const double alpha = xi - x[i], beta = x[i + 1] - xi;
    const double sbar = (2.0 * (y[i + 1] - y[i]) -
                         (alpha * d[i] + beta * d[i + 1])) / h;
    push_piece(x[i], y[i], d[i], (sbar - d[i]) / (2.0 * alpha));
    const double yhat = y[i] + 0.5 * (d[i] + sbar) * alpha;
    push_piece(xi, yhat, sbar, (d[i + 1] - sbar) / (2.0 * beta));
  }
  curve->piece_x.push_back(x[n - 1]);
}

}  // namespace

double EntropyCurve::value(double i) const {
  if (i >= junction_end) return floor_h - eps;
  if (i >= i_c1) {
    const double t = i - i_c1;
    return jun_a + t * (jun_b + t * (jun_c + t * jun_d));
  }
  std::size_t j = 0;
  if (i > piece_x.front()) {
    j = static_cast<std::size_t>(
            std::upper_bound(piece_x.begin(), piece_x.end(), i) -
            piece_x.begin()) - 1;
    j = std::min(j, piece_a.size() - 1);
    const double dx = i - piece_x[j];
    return piece_a[j] + dx * (piece_b[j] + dx * piece_c[j]);
  }
  // tangent extension below the solved grid (valid for a convex curve)
  return piece_a[0] + (i - piece_x[0]) * piece_b[0];
}

double EntropyCurve::derivative(double i) const {
  if (i >= junction_end) return 0.0;
  if (i >= i_c1) {
    const double t = i - i_c1;
    return jun_b + t * (2.0 * jun_c + t * 3.0 * jun_d);
  }
  if (i <= piece_x.front()) return piece_b[0];
  std::size_t j = static_cast<std::size_t>(
                      std::upper_bound(piece_x.begin(), piece_x.end(), i) -
                      piece_x.begin()) - 1;
  j = std::min(j, piece_a.size() - 1);
  return piece_b[j] + 2.0 * piece_c[j] * (i - piece_x[j]);
}

EntropyCurve entropy_curve(const IScore& score, const CurveOptions& options) {
  if (!score.bounds_set)
    throw std::invalid_argument("curve: score has no characteristic points");
  if (options.knots < 4)
    throw std::invalid_argument("curve: need at least 4 knots");
  const double range = score.i_c1 - score.i_q1;
  if (!(range > 1e-9 * (1.0 + std::abs(score.i_c1))))
    throw std::invalid_argument("curve: degenerate nonlocal range");

  EntropyCurve curve;
  curve.i_q1 = score.i_q1;
  curve.i_c1 = score.i_c1;
  curve.i_c2 = score.i_c2;
  curve.eps = options.smoothing;
  curve.floor_h =
      std::max(binary_entropy(options.entropy.noisy_p), 0.0);

  // Geometric grid: spacing shrinks by grid_ratio toward i_c1, where the
  // curve's curvature concentrates.
  const double lo = score.i_q1 + options.low_inset * range;
  const int k = options.knots;
  std::vector<double> grid(k);
  const double rho = options.grid_ratio;
  const double denom = std::pow(rho, k - 1) - 1.0;
  for (int j = 0; j < k; ++j) {
    const double u =
        denom > 0.0 ? 1.0 - (std::pow(rho, k - 1 - j) - 1.0) / denom
                    : static_cast<double>(j) / (k - 1);
    grid[j] = lo + (score.i_c1 - lo) * u;
  }
  grid.back() = score.i_c1;
  for (double e : options.extra_knots)
    if (e > lo && e < score.i_c1) grid.push_back(e);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end(),
                         [&](double a, double b) {
                           return std::abs(a - b) < 1e-9 * (1.0 + range);
                         }),
             grid.end());

  // Solve the grid.  A knot whose solve breaks down is retried once a hair
  // away (razor-edge failures are score-specific) and dropped if it still
  // fails: keeping it at the floor value would drag the convex hull down
  // through a fictitious dip.
  std::vector<double> xs, hs;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    double at = grid[j];
    EntropyBound e = h_score_bound(score.lambda, at, options.entropy);
    if (e.status != SdpStatus::Optimal || std::isnan(e.raw)) {
      at = grid[j] + (j + 1 < grid.size() ? 1.0 : -1.0) * 1e-6 * range;
      e = h_score_bound(score.lambda, at, options.entropy);
    }
    if (e.status != SdpStatus::Optimal || std::isnan(e.raw)) {
      curve.all_solves_ok = false;
      continue;
    }
    xs.push_back(at);
    hs.push_back(e.value);
  }
  if (xs.size() < 2)
    throw std::runtime_error("curve: too few grid solves succeeded");

  std::vector<double> repaired = lower_hull_values(xs, hs);
  for (std::size_t j = 0; j < xs.size(); ++j)
    if (std::abs(repaired[j] - hs[j]) > 1e-12)
      curve.convexity_repaired = true;
  curve.knot_i = xs;
  curve.knot_h = repaired;

  build_spline(curve.knot_i, curve.knot_h, &curve);

  // Cubic junction from the spline's end into the down-shifted flat part:
  // matches value and slope at i_c1, reaches floor - eps with zero slope.
  const double w = 2.5 * curve.eps;
  curve.junction_end = curve.i_c1 + w;
  const std::size_t last = curve.piece_a.size() - 1;
  const double dxl = curve.i_c1 - curve.piece_x[last];
  const double v0 =
      curve.piece_a[last] + dxl * (curve.piece_b[last] + dxl * curve.piece_c[last]);
  const double s0 = curve.piece_b[last] + 2.0 * curve.piece_c[last] * dxl;
  const double v1 = curve.floor_h - curve.eps;
  // Hermite coefficients on t = i - i_c1, t in [0, w], end slope 0.
  curve.jun_a = v0;
  curve.jun_b = s0;
  curve.jun_c = (3.0 * (v1 - v0) - 2.0 * s0 * w) / (w * w);
  curve.jun_d = (s0 * w - 2.0 * (v1 - v0)) / (w * w * w);
  return curve;
}

}  // namespace diqkd
