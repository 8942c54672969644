// Copyright (c) 2026 the diqkd authors.
// Distributed under the MIT License (see LICENSE).

#ifndef DIQKD_NELDER_MEAD_HPP
#define DIQKD_NELDER_MEAD_HPP

#include <algorithm>
#include <cstddef>
#include <functional>
#include <vector>

namespace diqkd {

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
};

// Downhill simplex minimization with the standard coefficients
// (reflect 1, expand 2, contract 1/2, shrink 1/2).  Deterministic given the
// start point and steps.  Stops when the simplex value spread drops below
// tol or the evaluation budget runs out.  Constraints are the caller's
// business: return a large finite value outside the feasible box.
inline NelderMeadResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> x0, const std::vector<double>& steps,
    double tol = 1e-9, int max_evals = 4000) {
  const size_t n = x0.size();
  NelderMeadResult res;
  std::vector<std::vector<double>> pts(n + 1, x0);
  std::vector<double> vals(n + 1);
  for (size_t i = 0; i < n; ++i) pts[i + 1][i] += steps[i];
  for (size_t i = 0; i <= n; ++i) vals[i] = f(pts[i]);
  res.evaluations = static_cast<int>(n) + 1;

  auto order = [&] {
    std::vector<size_t> idx(n + 1);
    for (size_t i = 0; i <= n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](size_t a, size_t b) { return vals[a] < vals[b]; });
    std::vector<std::vector<double>> p2(n + 1);
    std::vector<double> v2(n + 1);
    for (size_t i = 0; i <= n; ++i) {
      p2[i] = pts[idx[i]];
      v2[i] = vals[idx[i]];
    }
    pts.swap(p2);
    vals.swap(v2);
  };

  order();
  while (res.evaluations < max_evals && vals[n] - vals[0] > tol) {
    std::vector<double> centroid(n, 0.0);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) centroid[j] += pts[i][j] / n;

    auto at = [&](double c) {
      std::vector<double> p(n);
      for (size_t j = 0; j < n; ++j)
        p[j] = centroid[j] + c * (pts[n][j] - centroid[j]);
      return p;
    };

    std::vector<double> xr = at(-1.0);
    double fr = f(xr);
    ++res.evaluations;
    if (fr < vals[0]) {
      std::vector<double> xe = at(-2.0);
      double fe = f(xe);
      ++res.evaluations;
      pts[n] = fe < fr ? xe : xr;
      vals[n] = std::min(fe, fr);
    } else if (fr < vals[n - 1]) {
      pts[n] = xr;
      vals[n] = fr;
    } else {
      const bool outside = fr < vals[n];
      std::vector<double> xc = at(outside ? -0.5 : 0.5);
      double fc = f(xc);
      ++res.evaluations;
      if (fc < std::min(fr, vals[n])) {
        pts[n] = xc;
        vals[n] = fc;
      } else {
        // shrink toward the best vertex
        for (size_t i = 1; i <= n; ++i) {
          for (size_t j = 0; j < n; ++j)
            pts[i][j] = pts[0][j] + 0.5 * (pts[i][j] - pts[0][j]);
          vals[i] = f(pts[i]);
          ++res.evaluations;
        }
      }
    }
    order();
  }
  res.x = pts[0];
  res.value = vals[0];
  return res;
}

}  // namespace diqkd

#endif
