#include <doctest.h>

#include "diqkd/analytic.hpp"
#include "diqkd/circuit.hpp"

#include <cmath>
#include <stdexcept>

using namespace diqkd;

TEST_CASE("binary entropy anchors") {
  CHECK(binary_entropy(0.5) == 1.0);
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  // frozen from a 40-digit evaluation
  CHECK(binary_entropy(0.11) == doctest::Approx(0.4999159581645280).epsilon(1e-14));
  CHECK(binary_entropy(1.0 / 3.0) == doctest::Approx(0.9182958340544895).epsilon(1e-14));
  CHECK(binary_entropy(0.3) == binary_entropy(0.7));
  CHECK_THROWS_AS(binary_entropy(-0.2), std::domain_error);
  CHECK_THROWS_AS(binary_entropy(1.2), std::domain_error);
}

TEST_CASE("conditional entropy of the key pair") {
  Behavior b;
  // perfectly correlated key column
  for (int x = 1; x <= 2; ++x)
    for (int y = 0; y <= 2; ++y) {
      b.prob(0, 0, x, y) = 0.5;
      b.prob(1, 1, x, y) = 0.5;
      b.prob(0, 1, x, y) = 0.0;
      b.prob(1, 0, x, y) = 0.0;
    }
  CHECK(h_a_given_b(b) == doctest::Approx(0.0).epsilon(1e-15));
  // independent uniform column
  for (int a = 0; a < 2; ++a)
    for (int bb = 0; bb < 2; ++bb) b.prob(a, bb, 1, 0) = 0.25;
  CHECK(h_a_given_b(b) == doctest::Approx(1.0).epsilon(1e-15));
  // asymmetric column: H(A|B) differs from H(B|A); frozen by hand:
  // P = [[0.4, 0.1], [0.1, 0.4]] -> H(A|B) = h(0.2)
  b.prob(0, 0, 1, 0) = 0.4;
  b.prob(0, 1, 1, 0) = 0.1;
  b.prob(1, 0, 1, 0) = 0.1;
  b.prob(1, 1, 1, 0) = 0.4;
  CHECK(h_a_given_b(b) == doctest::Approx(binary_entropy(0.2)).epsilon(1e-14));
}

TEST_CASE("chsh entropy curve anchors") {
  const double s22 = 2.0 * std::sqrt(2.0);
  CHECK(analytic_chsh_entropy(s22, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(analytic_chsh_entropy(2.0, 0.0) == doctest::Approx(0.0).epsilon(1e-12));
  // frozen from a 40-digit evaluation
  CHECK(analytic_chsh_entropy(2.3, 0.0) ==
        doctest::Approx(0.2471024321379349).epsilon(1e-13));
  CHECK(analytic_chsh_entropy(2.75, 0.0) ==
        doctest::Approx(0.8150472548370728).epsilon(1e-13));
  CHECK(analytic_chsh_entropy(2.3, 0.2) ==
        doctest::Approx(0.7870124775087065).epsilon(1e-13));
  // preprocessing floor at the local boundary
  CHECK(analytic_chsh_entropy(2.0, 0.13) ==
        doctest::Approx(binary_entropy(0.13)).epsilon(1e-13));
}

TEST_CASE("r0 formula anchors and properties") {
  const double s22 = 2.0 * std::sqrt(2.0);
  CHECK(r0(s22, 0.0, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r0(2.0, 0.0, 0.0) == doctest::Approx(0.0).epsilon(1e-12));
  // nondecreasing in S at fixed p
  for (double p : {0.0, 0.05, 0.2}) {
    double prev = -1.0;
    for (double S = 2.0; S <= s22 + 1e-12; S += 0.02) {
      const double v = r0(S, p, 0.0);
      CHECK(v >= prev - 1e-12);
      prev = v;
    }
  }
  // the p-dependent term is nonnegative and vanishes only at p = 0 or S = 2sqrt2
  for (double p : {0.01, 0.1, 0.3}) {
    for (double S = 2.0; S < s22 - 1e-6; S += 0.1) {
      const double term = binary_entropy(
          0.5 * (1 + std::sqrt(1 - p * (1 - p) * (8 - S * S))));
      CHECK(term > 0.0);
    }
    CHECK(binary_entropy(0.5 * (1 + std::sqrt(1 - p * (1 - p) * (8 - 8.0)))) ==
          0.0);
  }
}

TEST_CASE("optimize_r0 anchors") {
  CHECK_THROWS_AS(optimize_r0(0.5), std::invalid_argument);

  const R0Optimum full = optimize_r0(1.0, 7);
  CHECK(full.rate > 0.2);
  CHECK(full.rate <= 1.0);

  const R0Optimum mid = optimize_r0(0.92, 7);
  CHECK(mid.rate > 0.0);
  CHECK(mid.rate <= 1.0);

  const R0Optimum low = optimize_r0(0.80, 7);
  CHECK(low.rate <= 0.0);

  // determinism given the seed
  const R0Optimum again = optimize_r0(0.92, 7);
  CHECK(again.rate == mid.rate);
  CHECK(again.params.T == mid.params.T);
  CHECK(again.params.alpha2 == mid.params.alpha2);
}
