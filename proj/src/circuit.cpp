// Copyright (c) 2026 the diqkd authors.
// Distributed under the MIT License (see LICENSE).

#include "diqkd/circuit.hpp"

#include <cmath>
#include <stdexcept>

namespace diqkd {

double p_no_click_joint(double T, double eta, double alpha, double beta) {
  const double R = 1.0 - eta;
  const double d = R * R * T * T - 1.0;  // strictly negative for T < 1
  const double quad = (1.0 - R + R * R * T * T - R * T * T) / d;
  const double cross = -2.0 * alpha * beta * T * (R - 1.0) * (R - 1.0) / d;
  return (1.0 - T * T) / (1.0 - R * R * T * T) *
         std::exp((alpha * alpha + beta * beta) * quad + cross);
}

// Reduced single-mode statistics: a displaced thermal state with mean photon
// number T^2/(1-T^2) seen by a detector of efficiency eta.  Equivalently the
// two-detector expression with the far detector blinded (its R set to 1).
double p_no_click_marginal(double T, double eta, double alpha) {
  const double R = 1.0 - eta;
  const double f = (1.0 - T * T) / (1.0 - R * T * T);
  return f * std::exp(-eta * alpha * alpha * f);
}

namespace {

void check_params(const CircuitParams& c, double eta) {
  if (!(c.T >= 0.0 && c.T < 1.0))
    throw std::invalid_argument("behavior: T must lie in [0, 1)");
  if (!(eta >= 0.0 && eta <= 1.0))
    throw std::invalid_argument("behavior: eta must lie in [0, 1]");
  if (!(c.zeta >= 0.0 && c.zeta <= 1.0) || !(c.chi >= 0.0 && c.chi <= 1.0))
    throw std::invalid_argument("behavior: leakage fractions must lie in [0, 1]");
  if (c.zeta < 1.0 && c.chi < 1.0)
    throw std::invalid_argument(
        "behavior: squeezing and displacement leakage are mutually exclusive");
  if (!(c.p >= 0.0 && c.p <= 0.5))
    throw std::invalid_argument("behavior: preprocessing flip must lie in [0, 0.5]");
}

struct NoClick {
  double joint(double alpha, double beta) const {
    double p = p_no_click_joint(T1, eta, a_scale * alpha, a_scale * beta);
    if (tms_leak) p *= p_no_click_joint(T2, eta, 0.0, 0.0);
    if (disp_leak)
      p *= std::exp(-eta * leak_frac * (alpha * alpha + beta * beta));
    return p;
  }
  double marginal(double alpha) const {
    double p = p_no_click_marginal(T1, eta, a_scale * alpha);
    if (tms_leak) p *= p_no_click_marginal(T2, eta, 0.0);
    if (disp_leak) p *= std::exp(-eta * leak_frac * alpha * alpha);
    return p;
  }

  double T1, T2, eta, a_scale, leak_frac;
  bool tms_leak, disp_leak;
};

NoClick make_no_click(const CircuitParams& c, double eta) {
  NoClick nc;
  nc.eta = eta;
  nc.tms_leak = c.zeta < 1.0;
  nc.disp_leak = c.chi < 1.0;
  nc.T1 = nc.tms_leak ? std::sqrt(c.zeta) * c.T : c.T;
  nc.T2 = nc.tms_leak ? std::sqrt(1.0 - c.zeta) * c.T : 0.0;
  nc.a_scale = nc.disp_leak ? std::sqrt(c.chi) : 1.0;
  nc.leak_frac = nc.disp_leak ? 1.0 - c.chi : 0.0;
  return nc;
}

}  // namespace

Behavior behavior(const CircuitParams& params, double eta) {
  check_params(params, eta);
  const NoClick nc = make_no_click(params, eta);

  Behavior b;
  for (int x = 1; x <= 2; ++x) {
    const double pa0 = nc.marginal(params.alpha(x));
    for (int y = 0; y <= 2; ++y) {
      const double pb0 = nc.marginal(params.beta(y));
      const double p00 = nc.joint(params.alpha(x), params.beta(y));
      double p01 = pa0 - p00;
      double p10 = pb0 - p00;
      double p11 = 1.0 - pa0 - pb0 + p00;
      // The closed forms satisfy the monotonicity that makes these
      // nonnegative; clamp the last few ulps of rounding.
      if (p01 < 0.0 && p01 > -1e-12) p01 = 0.0;
      if (p10 < 0.0 && p10 > -1e-12) p10 = 0.0;
      if (p11 < 0.0 && p11 > -1e-12) p11 = 0.0;
      b.prob(0, 0, x, y) = p00;
      b.prob(0, 1, x, y) = p01;
      b.prob(1, 0, x, y) = p10;
      b.prob(1, 1, x, y) = p11;
    }
  }
  return b;
}

Behavior apply_preprocessing(const Behavior& b, double p) {
  if (!(p >= 0.0 && p <= 0.5))
    throw std::invalid_argument("apply_preprocessing: p must lie in [0, 0.5]");
  Behavior out;
  for (int x = 1; x <= 2; ++x)
    for (int y = 0; y <= 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int bb = 0; bb < 2; ++bb)
          out.prob(a, bb, x, y) =
              (1.0 - p) * b.prob(a, bb, x, y) + p * b.prob(1 - a, bb, x, y);
  return out;
}

double Behavior::marginal_a(int a, int x) const {
  return prob(a, 0, x, 1) + prob(a, 1, x, 1);
}

double Behavior::marginal_b(int b, int y) const {
  return prob(0, b, 1, y) + prob(1, b, 1, y);
}

double Behavior::correlator(int x, int y) const {
  return prob(0, 0, x, y) - prob(0, 1, x, y) - prob(1, 0, x, y) +
         prob(1, 1, x, y);
}

std::array<double, 16> Behavior::test_components() const {
  std::array<double, 16> v;
  for (int x = 1; x <= 2; ++x)
    for (int y = 1; y <= 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          v[event_index(a, b, x, y)] = prob(a, b, x, y);
  return v;
}

double chsh_score(const Behavior& b) {
  return b.correlator(1, 1) + b.correlator(1, 2) + b.correlator(2, 1) -
         b.correlator(2, 2);
}

}  // namespace diqkd
