// Copyright (c) 2026 the diqkd authors.
// Distributed under the MIT License (see LICENSE).

#ifndef DIQKD_CIRCUIT_HPP
#define DIQKD_CIRCUIT_HPP

#include <array>

namespace diqkd {

// Photonic Bell test built from a two-mode squeezed vacuum source, local
// displacements and non-number-resolving detectors with efficiency eta.
// Outcome 0 is "no click".  Alice has settings x in {1, 2} (displacement
// alpha_x), Bob has y in {0, 1, 2} (displacement beta_y); y = 0 is the key
// generation setting, y in {1, 2} are the test settings.
//
// Two optional source imperfections, mutually exclusive per call:
//  * zeta < 1: a fraction of the squeezing ends up in an undisplaced mode
//    pair.  The displaced pair keeps transmittance sqrt(zeta) * T and the
//    leaked pair has sqrt(1 - zeta) * T, so T_1^2 + T_2^2 = T^2 exactly.
//  * chi < 1: a fraction of each displacement misses the squeezed modes and
//    lands on vacuum.  The squeezed pair sees sqrt(chi) times the amplitude
//    and the vacuum pair is displaced by the sqrt(1 - chi) remainder.
struct CircuitParams {
  double T = 0.25;       // squeezing transmittance, tanh of the gain
  double alpha1 = 0.0;   // Alice displacement, x = 1
  double alpha2 = 0.0;   // Alice displacement, x = 2
  double beta0 = 0.0;    // Bob displacement, key setting y = 0
  double beta1 = 0.0;    // Bob displacement, y = 1
  double beta2 = 0.0;    // Bob displacement, y = 2
  double p = 0.0;        // noisy preprocessing flip probability on Alice
  double zeta = 1.0;     // squeezing leakage fraction kept (1 = no leakage)
  double chi = 1.0;      // displacement fraction kept (1 = no leakage)

  double alpha(int x) const { return x == 1 ? alpha1 : alpha2; }
  double beta(int y) const { return y == 0 ? beta0 : (y == 1 ? beta1 : beta2); }
};

// Joint conditional distribution P(a, b | x, y) with a, b in {0, 1},
// x in {1, 2}, y in {0, 1, 2}.
class Behavior {
 public:
  double& prob(int a, int b, int x, int y) { return p_[idx(a, b, x, y)]; }
  double prob(int a, int b, int x, int y) const { return p_[idx(a, b, x, y)]; }

  double marginal_a(int a, int x) const;  // uses y = 1 (no-signaling holds)
  double marginal_b(int b, int y) const;

  // Correlator E_xy = sum_ab (-1)^(a+b) P(ab|xy).
  double correlator(int x, int y) const;

  // Components over the four test settings in the canonical event order
  // k = (((x-1)*2 + (y-1))*2 + a)*2 + b.  This ordering is shared by
  // I-score coefficient vectors and the finite-size event statistics.
  std::array<double, 16> test_components() const;

  static constexpr int event_index(int a, int b, int x, int y) {
    return (((x - 1) * 2 + (y - 1)) * 2 + a) * 2 + b;
  }

 private:
  static constexpr int idx(int a, int b, int x, int y) {
    return ((a * 2 + b) * 2 + (x - 1)) * 3 + y;
  }
  std::array<double, 24> p_{};
};

// No-click probabilities of a single displaced squeezed mode pair, in closed
// form.  T is the pair transmittance, eta the detector efficiency, alpha and
// beta the local displacement amplitudes (real, may be negative).
double p_no_click_joint(double T, double eta, double alpha, double beta);
double p_no_click_marginal(double T, double eta, double alpha);

// Exact behavior of the circuit at detector efficiency eta.  Throws
// std::invalid_argument if both leakage mechanisms are enabled at once or if
// any parameter is out of range.
Behavior behavior(const CircuitParams& params, double eta);

// Classical bit flip on Alice's outcome with probability p, applied to every
// setting.
Behavior apply_preprocessing(const Behavior& b, double p);

// CHSH value S = E11 + E12 + E21 - E22 of the test settings.
double chsh_score(const Behavior& b);

}  // namespace diqkd

#endif
