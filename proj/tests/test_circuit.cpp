#include <doctest.h>

#include "diqkd/circuit.hpp"
#include "oracles/fock.hpp"

#include <cmath>
#include <stdexcept>

using namespace diqkd;

TEST_CASE("no-click anchors") {
  // Zero efficiency: detectors never click, regardless of displacements.
  CHECK(p_no_click_joint(0.5, 0.0, 0.3, -0.2) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p_no_click_marginal(0.5, 0.0, 0.7) == doctest::Approx(1.0).epsilon(1e-15));
  // Unit efficiency, no displacement: vacuum weight of the squeezed state.
  CHECK(p_no_click_joint(0.5, 1.0, 0.0, 0.0) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("closed forms agree with the Fock-space oracle") {
  for (double T : {0.1, 0.35, 0.5}) {
    for (double eta : {0.6, 0.875, 1.0}) {
      for (double alpha : {-0.5, 0.1, 0.45}) {
        for (double beta : {-0.3, 0.55}) {
          const double oj = oracle::no_click_joint(T, eta, alpha, beta);
          const double om = oracle::no_click_marginal(T, eta, alpha);
          CHECK(std::abs(p_no_click_joint(T, eta, alpha, beta) - oj) < 1e-12);
          CHECK(std::abs(p_no_click_marginal(T, eta, alpha) - om) < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("behavior rows are normalized nonnegative and non-signaling") {
  CircuitParams c;
  c.T = 0.249;
  c.alpha1 = 0.024;
  c.alpha2 = -0.521;
  c.beta0 = 0.013;
  c.beta1 = -0.104;
  c.beta2 = 0.034;
  const Behavior b = behavior(c, 0.875);
  for (int x = 1; x <= 2; ++x)
    for (int y = 0; y <= 2; ++y) {
      double s = 0.0;
      for (int a = 0; a < 2; ++a)
        for (int bb = 0; bb < 2; ++bb) {
          CHECK(b.prob(a, bb, x, y) >= 0.0);
          CHECK(b.prob(a, bb, x, y) <= 1.0);
          s += b.prob(a, bb, x, y);
        }
      CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    }
  // Marginals are independent of the other party's setting by construction;
  // check exact equality, not just closeness.
  for (int a = 0; a < 2; ++a)
    for (int x = 1; x <= 2; ++x) {
      const double m1 = b.prob(a, 0, x, 1) + b.prob(a, 1, x, 1);
      const double m2 = b.prob(a, 0, x, 2) + b.prob(a, 1, x, 2);
      CHECK(m1 == doctest::Approx(m2).epsilon(1e-15));
    }
}

TEST_CASE("behavior matches a direct Fock computation") {
  CircuitParams c;
  c.T = 0.3;
  c.alpha1 = 0.1;
  c.alpha2 = -0.4;
  c.beta0 = 0.05;
  c.beta1 = -0.2;
  c.beta2 = 0.25;
  const double eta = 0.9;
  const Behavior b = behavior(c, eta);
  for (int x = 1; x <= 2; ++x)
    for (int y = 0; y <= 2; ++y) {
      const double p00 = oracle::no_click_joint(c.T, eta, c.alpha(x), c.beta(y));
      const double pa = oracle::no_click_marginal(c.T, eta, c.alpha(x));
      const double pb = oracle::no_click_marginal(c.T, eta, c.beta(y));
      CHECK(std::abs(b.prob(0, 0, x, y) - p00) < 1e-12);
      CHECK(std::abs(b.prob(0, 1, x, y) - (pa - p00)) < 1e-12);
      CHECK(std::abs(b.prob(1, 0, x, y) - (pb - p00)) < 1e-12);
      CHECK(std::abs(b.prob(1, 1, x, y) - (1 - pa - pb + p00)) < 1e-12);
    }
}

TEST_CASE("squeezing leakage factor agrees with a two-pair Fock model") {
  CircuitParams c;
  c.T = 0.4;
  c.alpha1 = 0.2;
  c.beta1 = -0.3;
  c.zeta = 0.85;
  const double eta = 0.9;
  const Behavior b = behavior(c, eta);
  const double T1 = std::sqrt(c.zeta) * c.T;
  const double T2 = std::sqrt(1.0 - c.zeta) * c.T;
  // Transmittance splits so that T1^2 + T2^2 reproduces T^2 exactly.
  CHECK(T1 * T1 + T2 * T2 == doctest::Approx(c.T * c.T).epsilon(1e-15));
  const double expected = oracle::no_click_joint(T1, eta, c.alpha1, c.beta1) *
                          oracle::no_click_joint(T2, eta, 0.0, 0.0);
  CHECK(std::abs(b.prob(0, 0, 1, 1) - expected) < 1e-12);
}

TEST_CASE("displacement leakage factor agrees with a vacuum-pair Fock model") {
  CircuitParams c;
  c.T = 0.4;
  c.alpha1 = 0.3;
  c.beta1 = -0.25;
  c.chi = 0.8;
  const double eta = 0.85;
  const Behavior b = behavior(c, eta);
  const double keep = std::sqrt(c.chi);
  const double leak = std::sqrt(1.0 - c.chi);
  const double expected =
      oracle::no_click_joint(c.T, eta, keep * c.alpha1, keep * c.beta1) *
      oracle::no_click_joint(0.0, eta, leak * c.alpha1, leak * c.beta1);
  CHECK(std::abs(b.prob(0, 0, 1, 1) - expected) < 1e-12);
}

TEST_CASE("unit leakage fractions reduce to the clean circuit bit for bit") {
  CircuitParams c;
  c.T = 0.249;
  c.alpha1 = 0.024;
  c.alpha2 = -0.521;
  c.beta1 = -0.104;
  c.beta2 = 0.034;
  const Behavior clean = behavior(c, 0.875);
  CircuitParams z = c;
  z.zeta = 1.0;
  CircuitParams d = c;
  d.chi = 1.0;
  const Behavior bz = behavior(z, 0.875);
  const Behavior bd = behavior(d, 0.875);
  for (int x = 1; x <= 2; ++x)
    for (int y = 0; y <= 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int bb = 0; bb < 2; ++bb) {
          CHECK(bz.prob(a, bb, x, y) == clean.prob(a, bb, x, y));
          CHECK(bd.prob(a, bb, x, y) == clean.prob(a, bb, x, y));
        }
}

TEST_CASE("simultaneous leakage mechanisms are rejected") {
  CircuitParams c;
  c.zeta = 0.9;
  c.chi = 0.9;
  CHECK_THROWS_AS(behavior(c, 0.9), std::invalid_argument);
}

TEST_CASE("preprocessing scales correlators by 1 - 2p") {
  CircuitParams c;
  c.T = 0.3;
  c.alpha1 = 0.1;
  c.alpha2 = -0.4;
  c.beta1 = -0.2;
  c.beta2 = 0.25;
  const Behavior b = behavior(c, 0.95);
  const double p = 0.07;
  const Behavior bp = apply_preprocessing(b, p);
  for (int x = 1; x <= 2; ++x)
    for (int y = 0; y <= 2; ++y)
      CHECK(bp.correlator(x, y) ==
            doctest::Approx((1 - 2 * p) * b.correlator(x, y)).epsilon(1e-13));
  CHECK(chsh_score(bp) == doctest::Approx((1 - 2 * p) * chsh_score(b)).epsilon(1e-13));
  // Bob's marginals are untouched.
  for (int y = 0; y <= 2; ++y)
    CHECK(bp.marginal_b(0, y) == doctest::Approx(b.marginal_b(0, y)).epsilon(1e-15));
}

TEST_CASE("chsh of a deterministic strategy is exactly 2") {
  Behavior b;
  // a = 0 always, b = 0 always: E_xy = 1 for all settings, S = 2.
  for (int x = 1; x <= 2; ++x)
    for (int y = 0; y <= 2; ++y) {
      b.prob(0, 0, x, y) = 1.0;
      b.prob(0, 1, x, y) = 0.0;
      b.prob(1, 0, x, y) = 0.0;
      b.prob(1, 1, x, y) = 0.0;
    }
  CHECK(chsh_score(b) == 2.0);
}
