// Copyright (c) 2026 the diqkd authors.
// Distributed under the MIT License (see LICENSE).

#ifndef DIQKD_QUADRATURE_HPP
#define DIQKD_QUADRATURE_HPP

#include <vector>

namespace diqkd {

// Gauss-Radau rule on [0, 1] with a fixed node at t = 1.
//
// An m-point rule integrates polynomials up to degree 2m - 2 exactly.
// The nodes are returned in increasing order, so t.back() == 1.0 exactly
// and every weight is strictly positive.
struct Quadrature {
  std::vector<double> t;
  std::vector<double> w;
};

// Throws std::invalid_argument for m < 1.
Quadrature gauss_radau(int m);

}  // namespace diqkd

#endif
