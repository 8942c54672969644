// Copyright (c) 2026 the diqkd authors.
// Distributed under the MIT License (see LICENSE).

#ifndef DIQKD_ANALYTIC_HPP
#define DIQKD_ANALYTIC_HPP

#include "diqkd/circuit.hpp"

#include <cstdint>

namespace diqkd {

struct KeyRateTerms {
  double h_ae = 0.0;  // entropy bound used, bits
  double h_ab = 0.0;  // H(A1|B0), bits
  double rate = 0.0;  // h_ae - h_ab exactly
};

// Shannon binary entropy in bits, with the 0 log 0 = 0 convention.
// Throws std::domain_error outside [0, 1] (beyond a few ulps of slack).
double binary_entropy(double q);

// Conditional Shannon entropy H(A|B) of Alice's bit given Bob's on the key
// setting (x = 1, y = 0).  The behavior is expected to carry any noisy
// preprocessing already.  Zero-probability cells contribute zero.
double h_a_given_b(const Behavior& b);

// Analytic lower bound on H(A1|E) from the CHSH score alone, with noisy
// preprocessing:
//   1 - h( (1 + sqrt((S/2)^2 - 1)) / 2 )
//     + h( (1 + sqrt(1 - p(1-p)(8 - S^2))) / 2 ).
// S is clamped to [2, 2 sqrt(2)]; at S = 2 the value is the preprocessing
// floor h(p).
double analytic_chsh_entropy(double S, double p);

// CHSH-based asymptotic rate r0 = analytic_chsh_entropy(S, p) - h_ab.
double r0(double S, double p, double h_ab);

struct R0Optimum {
  CircuitParams params;
  double rate = 0.0;
};

// Maximize r0 over circuit parameters (T, displacements, preprocessing) at
// fixed detector efficiency, by seeded multistart Nelder-Mead.  Leakage
// fractions are taken from `base` and held fixed, so the same search runs
// for clean and leaky sources.  Deterministic given the seed.  Reports the
// best point found even when every start ends at rate <= 0.
R0Optimum optimize_r0(double eta, std::uint64_t seed = 1,
                      const CircuitParams& base = CircuitParams{});

}  // namespace diqkd

#endif
