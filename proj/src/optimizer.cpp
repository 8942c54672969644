// Copyright (c) 2026 the diqkd authors.
// Distributed under the MIT License (see LICENSE).

#include "diqkd/optimizer.hpp"

#include "diqkd/analytic.hpp"
#include "diqkd/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace diqkd {

namespace {

CircuitParams with_knobs(const CircuitParams& base,
                         const std::vector<double>& x) {
  CircuitParams p = base;
  p.T = x[0];
  p.alpha1 = x[1];
  p.alpha2 = x[2];
  p.beta0 = x[3];
  p.beta1 = x[4];
  p.beta2 = x[5];
  return p;
}

std::vector<double> knobs_of(const CircuitParams& p) {
  return {p.T, p.alpha1, p.alpha2, p.beta0, p.beta1, p.beta2};
}

bool knobs_in_box(const std::vector<double>& x) {
  if (x[0] < 0.01 || x[0] > 0.99) return false;
  for (int j = 1; j < 6; ++j)
    if (std::abs(x[j]) > 2.0) return false;
  return true;
}

}  // namespace

RateSplit block_rate(const CircuitParams& params, double eta,
                     const EntropyOptions& options) {
  EntropyOptions opt = options;
  opt.noisy_p = params.p;
  const Behavior b = behavior(params, eta);
  RateSplit out;
  out.bound = h_cond_bound(b, opt);
  out.entropy = out.bound.value;
  out.h_ab = h_a_given_b(apply_preprocessing(b, params.p));
  out.rate = out.entropy - out.h_ab;
  return out;
}

CircuitParams first_order_step(const CircuitParams& params, double eta,
                               const IScore& score, const EntropyCurve& curve,
                               const FirstOrderOptions& options) {
  const double i0 = iscore_value(score, behavior(params, eta));
  const double alpha = curve.derivative(i0);
  const double p = params.p;

  auto phi = [&](const CircuitParams& c) {
    const Behavior b = behavior(c, eta);
    return alpha * iscore_value(score, b) -
           h_a_given_b(apply_preprocessing(b, p));
  };
  const double phi0 = phi(params);

  auto neg = [&](const std::vector<double>& x) {
    if (!knobs_in_box(x)) return 1e6;
    return -phi(with_knobs(params, x));
  };

  const std::vector<double> steps = {0.02, 0.02, 0.02, 0.02, 0.02, 0.02};
  const NelderMeadResult r =
      nelder_mead(neg, knobs_of(params), steps, options.tol,
                  options.max_evals);
  if (-r.value > phi0 + options.tol && knobs_in_box(r.x))
    return with_knobs(params, r.x);
  return params;
}

KeyrateResult optimize_keyrate(double eta, const OptimizeOptions& options) {
  if (options.iterations < 1)
    throw std::invalid_argument("optimizer: iterations must be >= 1");

  KeyrateResult out;
  out.eta = eta;
  CircuitParams params = optimize_r0(eta, options.seed).params;

  for (int it = 0; it < options.iterations; ++it) {
    const Behavior b = behavior(params, eta);
    EntropyOptions eopt = options.entropy;
    eopt.noisy_p = params.p;
    const EntropyBound e = h_cond_bound(b, eopt);
    if (!e.has_behavior_certificate) break;

    IScore score = iscore_bounds(extract_iscore(e), eopt.sdp);
    const double i0 = iscore_value(score, b);

    CurveOptions copt = options.curve;
    copt.entropy = eopt;
    copt.extra_knots.push_back(i0);
    CircuitParams stepped = params;
    try {
      const EntropyCurve curve = entropy_curve(score, copt);
      stepped = first_order_step(params, eta, score, curve, options.step);
    } catch (const std::exception&) {
      break;  // degenerate score range: keep the current operating point
    }

    // Preprocessing refinement at the stepped circuit: rank candidates with
    // a reduced quadrature (the 1-D rate profile in p is smooth and the
    // ranking is insensitive to m), then let the next certifying solve run
    // at the chosen value.
    EntropyOptions rank = eopt;
    rank.m = std::min(options.entropy.m, options.p_rank_m);
    const Behavior bs = behavior(stepped, eta);
    double lo = 0.0, hi = options.p_max;
    double best_p = stepped.p, best_rate = -1e300;
    for (int stage = 0; stage < options.p_stages; ++stage) {
      for (int j = 0; j < options.p_points; ++j) {
        const double pc =
            lo + (hi - lo) * j / std::max(1, options.p_points - 1);
        rank.noisy_p = pc;
        const EntropyBound re = h_cond_bound(bs, rank);
        const double rr =
            re.value - h_a_given_b(apply_preprocessing(bs, pc));
        if (rr > best_rate) {
          best_rate = rr;
          best_p = pc;
        }
      }
      const double w = (hi - lo) * options.p_shrink;
      lo = std::max(0.0, best_p - 0.5 * w);
      hi = std::min(options.p_max, best_p + 0.5 * w);
    }
    stepped.p = best_p;
    params = stepped;
    out.iterations_done = it + 1;
  }

  const RateSplit fin = block_rate(params, eta, options.entropy);
  out.params = params;
  out.rate = fin.rate;
  out.entropy = fin.entropy;
  out.h_ab = fin.h_ab;
  out.bound = fin.bound;
  out.ok = fin.bound.has_behavior_certificate;
  if (out.ok)
    out.score = iscore_bounds(extract_iscore(fin.bound), options.entropy.sdp);
  return out;
}

}  // namespace diqkd
