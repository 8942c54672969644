// Copyright (c) 2026 the diqkd authors.
// Distributed under the MIT License (see LICENSE).

#include "diqkd/entropy.hpp"

#include "diqkd/analytic.hpp"
#include "diqkd/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

namespace diqkd {

namespace {

constexpr double kCertifiedGap = 1e-6;   // bits
constexpr double kBehaviorTol = 1e-7;    // normalization / no-signaling slack

// What pins down the device statistics in one bound computation.
struct Task {
  bool joint = false;
  bool from_behavior = false;
  std::array<double, 16> components{};  // canonical event order
  bool has_score_row = false;
  std::array<double, 9> cg_row{};       // score functional on the CG moments
  double score = 0.0;        // score the bound is reported for
  double solve_score = 0.0;  // score actually imposed in the solve
  EntropyOptions opt;
};

// Interior-point iterations need a strictly feasible interior, which the
// quantum set does not offer on its boundary: at the maximal CHSH score the
// compatible moment matrix is essentially unique.  Scores that close to the
// boundary are solved a small step inside instead, and the affine dual
// certificate — valid for every right-hand side — is evaluated at the
// requested score.  The reported value stays a rigorous lower bound; it
// merely concedes the curvature of the entropy over the inset.
constexpr double kScoreInset = 2e-3;

void validate_options(const EntropyOptions& opt, bool joint) {
  if (opt.m < 1) throw std::invalid_argument("entropy: m must be at least 1");
  if (!(opt.noisy_p >= 0.0 && opt.noisy_p <= 0.5))
    throw std::invalid_argument("entropy: noisy_p must lie in [0, 1/2]");
  if (opt.objective_x != 1 && opt.objective_x != 2)
    throw std::invalid_argument("entropy: objective_x must be 1 or 2");
  if (joint && opt.objective_y != 1 && opt.objective_y != 2)
    throw std::invalid_argument("entropy: objective_y must be 1 or 2");
  if (opt.eve_level < 1)
    throw std::invalid_argument("entropy: eve_level must be at least 1");
}

void validate_behavior(const Behavior& b) {
  for (int x = 1; x <= 2; ++x)
    for (int y = 1; y <= 2; ++y) {
      double sum = 0.0;
      for (int a = 0; a < 2; ++a)
        for (int bb = 0; bb < 2; ++bb) {
          double p = b.prob(a, bb, x, y);
          if (p < -1e-9)
            throw std::invalid_argument("entropy: negative probability");
          sum += p;
        }
      if (std::abs(sum - 1.0) > kBehaviorTol)
        throw std::invalid_argument("entropy: behavior is not normalized");
    }
  for (int x = 1; x <= 2; ++x)
    for (int a = 0; a < 2; ++a) {
      double m1 = b.prob(a, 0, x, 1) + b.prob(a, 1, x, 1);
      double m2 = b.prob(a, 0, x, 2) + b.prob(a, 1, x, 2);
      if (std::abs(m1 - m2) > kBehaviorTol)
        throw std::invalid_argument("entropy: behavior signals from Bob to Alice");
    }
  for (int y = 1; y <= 2; ++y)
    for (int bb = 0; bb < 2; ++bb) {
      double m1 = b.prob(0, bb, 1, y) + b.prob(1, bb, 1, y);
      double m2 = b.prob(0, bb, 2, y) + b.prob(1, bb, 2, y);
      if (std::abs(m1 - m2) > kBehaviorTol)
        throw std::invalid_argument("entropy: behavior signals from Alice to Bob");
    }
}

// Values of the nine CG moments implied by the 16 test components.
std::array<double, 9> cg_values(const std::array<double, 16>& c) {
  auto at = [&](int a, int b, int x, int y) {
    return c[Behavior::event_index(a, b, x, y)];
  };
  std::array<double, 9> v{};
  v[kCgOne] = 1.0;
  for (int x = 1; x <= 2; ++x) {
    double e = 0.0;
    for (int b = 0; b < 2; ++b) e += at(0, b, x, 1) - at(1, b, x, 1);
    v[x == 1 ? kCgA1 : kCgA2] = e;
  }
  for (int y = 1; y <= 2; ++y) {
    double e = 0.0;
    for (int a = 0; a < 2; ++a) e += at(a, 0, 1, y) - at(a, 1, 1, y);
    v[y == 1 ? kCgB1 : kCgB2] = e;
  }
  static constexpr int corr[2][2] = {{kCgA1B1, kCgA1B2}, {kCgA2B1, kCgA2B2}};
  for (int x = 1; x <= 2; ++x)
    for (int y = 1; y <= 2; ++y) {
      double e = 0.0;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          e += ((a + b) % 2 == 0 ? 1.0 : -1.0) * at(a, b, x, y);
      v[corr[x - 1][y - 1]] = e;
    }
  return v;
}

// Transpose of cg_values: spreads a weight on each CG moment onto the 16
// event components, so that <lambda, P> equals sum_j w_j * cg_values(P)_j
// for every normalized non-signaling P.
std::array<double, 16> cg_weights_to_event_multipliers(
    const std::array<double, 9>& w) {
  std::array<double, 16> lambda{};
  auto add = [&](int a, int b, int x, int y, double c) {
    lambda[Behavior::event_index(a, b, x, y)] += c;
  };
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) add(a, b, 1, 1, w[kCgOne]);
  for (int x = 1; x <= 2; ++x)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        add(a, b, x, 1, (a == 0 ? 1.0 : -1.0) * w[x == 1 ? kCgA1 : kCgA2]);
  for (int y = 1; y <= 2; ++y)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        add(a, b, 1, y, (b == 0 ? 1.0 : -1.0) * w[y == 1 ? kCgB1 : kCgB2]);
  static constexpr int corr[2][2] = {{kCgA1B1, kCgA1B2}, {kCgA2B1, kCgA2B2}};
  for (int x = 1; x <= 2; ++x)
    for (int y = 1; y <= 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          add(a, b, x, y,
              ((a + b) % 2 == 0 ? 1.0 : -1.0) * w[corr[x - 1][y - 1]]);
  return lambda;
}

// Rewrites a functional on the 16 event components as a functional on the
// CG moments, using P(ab|xy) = (1 + (-1)^a <Ax> + (-1)^b <By>
// + (-1)^(a+b) <AxBy>) / 4.
std::array<double, 9> event_multipliers_to_cg_row(
    const std::array<double, 16>& lambda) {
  std::array<double, 9> row{};
  static constexpr int corr[2][2] = {{kCgA1B1, kCgA1B2}, {kCgA2B1, kCgA2B2}};
  for (int x = 1; x <= 2; ++x)
    for (int y = 1; y <= 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          double l = lambda[Behavior::event_index(a, b, x, y)] / 4.0;
          double sa = a == 0 ? 1.0 : -1.0;
          double sb = b == 0 ? 1.0 : -1.0;
          row[kCgOne] += l;
          row[x == 1 ? kCgA1 : kCgA2] += sa * l;
          row[y == 1 ? kCgB1 : kCgB2] += sb * l;
          row[corr[x - 1][y - 1]] += sa * sb * l;
        }
  return row;
}

void add_term(const StructureBlock& blk, const Word& w, double c,
              std::map<int, double>& coeff) {
  auto it = blk.index.find(fold(w));
  if (it == blk.index.end())
    throw std::invalid_argument(
        "entropy: monomial basis cannot represent the objective");
  coeff[it->second] += c;
}

// Adds quadrature node (t, w)'s objective, acting on the given structure
// node's Eve letters, to the coefficient map.
void add_node_objective(const MomentStructure& S, const StructureBlock& blk,
                        int structure_node, double t, double w,
                        const EntropyOptions& opt, bool joint,
                        std::map<int, double>& coeff) {
  const double kappa = w / (t * std::numbers::ln2);
  const double e = 1.0 - 2.0 * opt.noisy_p;
  const Word ax = word_a(opt.objective_x);
  const Word by = word_b(opt.objective_y);
  for (int a = 0; a < 2; ++a) {
    const double sa = (a == 0 ? 1.0 : -1.0) * e;
    for (int b = 0; b < (joint ? 2 : 1); ++b) {
      const double sb = b == 0 ? 1.0 : -1.0;
      std::vector<std::pair<double, Word>> proj;
      if (!joint) {
        proj = {{0.5, word_identity()}, {0.5 * sa, ax}};
      } else {
        proj = {{0.25, word_identity()},
                {0.25 * sa, ax},
                {0.25 * sb, by},
                {0.25 * sa * sb, multiply(ax, by)}};
      }
      const int letter = S.z_letter(structure_node, a, b);
      const Word z = word_z(letter, false);
      const Word zd = word_z(letter, true);
      const Word zdz = multiply(zd, z);
      const Word zzd = multiply(z, zd);
      for (const auto& [c, wab] : proj) {
        add_term(blk, multiply(wab, z), kappa * c, coeff);
        add_term(blk, multiply(wab, zd), kappa * c, coeff);
        if (t != 1.0)
          add_term(blk, multiply(wab, zdz), kappa * c * (1.0 - t), coeff);
      }
      add_term(blk, zzd, kappa * t, coeff);
    }
  }
}

std::vector<std::pair<int, double>> emit_objective(
    const std::map<int, double>& coeff) {
  std::vector<std::pair<int, double>> out;
  out.reserve(coeff.size());
  for (const auto& [id, c] : coeff)
    if (c != 0.0) out.emplace_back(id, c);
  return out;
}

EntropyBound solve_task(const Task& task) {
  const EntropyOptions& opt = task.opt;
  validate_options(opt, task.joint);
  const std::vector<Word> mono =
      opt.monomials.empty() ? ab_level1() : opt.monomials;
  const Quadrature q = gauss_radau(opt.m);
  double cm = 0.0;
  std::vector<double> node_const(opt.m);
  for (int i = 0; i < opt.m; ++i) {
    node_const[i] = q.w[i] / (q.t[i] * std::numbers::ln2);
    cm += node_const[i];
  }

  const bool split = opt.mode == HierarchyMode::Split;
  // Split solves share one single-node structure; each quadrature node's
  // problem only differs in the objective coefficients, and the sum of the
  // independent minima is exactly the split-hierarchy value.
  const MomentStructure S =
      build_structure(mono, split ? 1 : opt.m,
                      split ? HierarchyMode::Block : opt.mode, task.joint,
                      opt.eve_level);
  const std::array<int, 9>& cg = S.blocks[0].cg;

  EntropyBound out;
  out.mode = opt.mode;
  out.joint = task.joint;
  out.m = opt.m;
  out.preprocessing = opt.noisy_p;

  const auto run_one = [&](int first_node, int node_count) {
    SdpProblem prob;
    prob.structure = &S;
    std::map<int, double> coeff;
    for (int k = 0; k < node_count; ++k) {
      const int qi = first_node + k;
      const int sn = split ? 0 : qi;
      const StructureBlock& blk =
          S.blocks[S.mode == HierarchyMode::Full ? 0 : sn];
      add_node_objective(S, blk, sn, q.t[qi], q.w[qi], opt, task.joint, coeff);
    }
    prob.objective = emit_objective(coeff);
    if (task.from_behavior) {
      const std::array<double, 9> v = cg_values(task.components);
      for (int j = 0; j < 9; ++j)
        if (cg[j] >= 0) prob.fixed.emplace_back(cg[j], v[j]);
    } else {
      prob.fixed.emplace_back(cg[kCgOne], 1.0);
      if (task.has_score_row) {
        LinearCombo row;
        row.rhs = task.solve_score - task.cg_row[kCgOne];
        for (int j = 1; j < 9; ++j) {
          if (task.cg_row[j] == 0.0) continue;
          if (cg[j] < 0)
            throw std::invalid_argument(
                "entropy: monomial basis cannot represent the score");
          row.terms.emplace_back(cg[j], task.cg_row[j]);
        }
        prob.equalities.push_back(std::move(row));
      }
    }
    return solve_sdp(prob, opt.sdp);
  };

  const int nsolve = split ? opt.m : 1;
  bool all_ok = true;
  double dual_sum = 0.0;
  double gap_max = 0.0;
  std::array<double, 9> weight_sum{};
  double one_weight = 0.0;
  double row_dual = 0.0;
  for (int sidx = 0; sidx < nsolve; ++sidx) {
    const SdpResult r = split ? run_one(sidx, 1) : run_one(0, opt.m);
    out.solve_status.push_back(r.status);
    out.iterations += r.iterations;
    if (!r.ok()) {
      all_ok = false;
      if (out.status == SdpStatus::NumericalFailure ||
          out.solve_status.size() == 1)
        out.status = r.status;
      continue;
    }
    dual_sum += r.dual;
    gap_max = std::max(gap_max, r.gap);
    std::array<double, 9> w{};
    for (int j = 0; j < 9; ++j)
      if (cg[j] >= 0) w[j] = r.dual_weight[cg[j]];
    if (task.from_behavior) {
      for (int j = 0; j < 9; ++j) weight_sum[j] += w[j];
      if (split) {
        out.block_offsets.push_back(node_const[sidx]);
        out.block_multipliers.push_back(cg_weights_to_event_multipliers(w));
      }
    } else if (task.has_score_row) {
      one_weight += w[kCgOne];
      row_dual += r.equality_dual[0];
    }
  }
  if (all_ok) out.status = SdpStatus::Optimal;

  const double floor = std::max(binary_entropy(opt.noisy_p), 0.0);
  if (all_ok) {
    // Evaluating the affine certificate at the requested score covers the
    // case where the solve was nudged inside the quantum boundary.
    const double extend =
        task.has_score_row ? row_dual * (task.score - task.solve_score) : 0.0;
    out.raw = cm + dual_sum + extend;
    out.value = std::max(out.raw, floor);
    out.duality_gap = gap_max;
    out.certified = gap_max <= kCertifiedGap;
    if (!split) {
      if (task.from_behavior) {
        out.has_behavior_certificate = true;
        out.offset = cm;
        out.dual_multipliers = cg_weights_to_event_multipliers(weight_sum);
      } else if (task.has_score_row) {
        // bound(s') = cm - w_one + y * (s' - row_one), affine in the score.
        out.has_score_certificate = true;
        out.score_dual = row_dual;
        out.score_offset = cm - one_weight - row_dual * task.cg_row[kCgOne];
      }
    }
  } else {
    // No certified bound was produced; the preprocessing floor is the only
    // thing that can be asserted about the device.
    out.raw = std::numeric_limits<double>::quiet_NaN();
    out.value = floor;
    out.duality_gap = gap_max;
  }
  return out;
}

}  // namespace

double quadrature_constant(int m) {
  const Quadrature q = gauss_radau(m);
  double cm = 0.0;
  for (int i = 0; i < m; ++i) cm += q.w[i] / (q.t[i] * std::numbers::ln2);
  return cm;
}

EntropyBound h_cond_bound(const Behavior& b, const EntropyOptions& opt) {
  validate_behavior(b);
  Task t;
  t.from_behavior = true;
  t.components = b.test_components();
  t.opt = opt;
  return solve_task(t);
}

namespace {

Task chsh_task(double chsh, const EntropyOptions& opt, bool joint) {
  const double limit = 2.0 * std::numbers::sqrt2;
  if (!(std::abs(chsh) <= limit + 1e-9))
    throw std::invalid_argument(
        "entropy: CHSH score outside [-2 sqrt 2, 2 sqrt 2]");
  Task t;
  t.joint = joint;
  t.has_score_row = true;
  t.cg_row[kCgA1B1] = 1.0;
  t.cg_row[kCgA1B2] = 1.0;
  t.cg_row[kCgA2B1] = 1.0;
  t.cg_row[kCgA2B2] = -1.0;
  t.score = chsh;
  t.solve_score =
      std::clamp(chsh, -(limit - kScoreInset), limit - kScoreInset);
  t.opt = opt;
  return t;
}

}  // namespace

EntropyBound h_cond_bound(double chsh, const EntropyOptions& opt) {
  return solve_task(chsh_task(chsh, opt, false));
}

EntropyBound h_score_bound(const std::array<double, 16>& lambda, double score,
                           const EntropyOptions& opt) {
  Task t;
  t.has_score_row = true;
  t.cg_row = event_multipliers_to_cg_row(lambda);
  t.score = score;
  t.solve_score = score;
  t.opt = opt;
  return solve_task(t);
}

EntropyBound h_joint_bound(double chsh, const EntropyOptions& opt) {
  return solve_task(chsh_task(chsh, opt, true));
}

}  // namespace diqkd
