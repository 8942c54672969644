// Copyright (c) 2026 the diqkd authors.
// Distributed under the MIT License (see LICENSE).

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <vector>

#include "sdp_internal.hpp"

namespace diqkd {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using detail::BlockLayout;
using detail::Layout;

std::atomic<long> g_solve_count{0};

// Largest step keeping S + alpha * dS positive definite (up to a safety
// margin applied by the caller); huge when every step is safe.
double max_step(const MatrixXd& S, const MatrixXd& dS) {
  Eigen::LLT<MatrixXd> llt(S);
  if (llt.info() != Eigen::Success) return 0.0;
  MatrixXd A1 = llt.matrixL().solve(dS);
  MatrixXd B = llt.matrixL().solve(A1.transpose());
  Eigen::SelfAdjointEigenSolver<MatrixXd> es;
  es.compute(0.5 * (B + B.transpose()), Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  if (lmin >= -1e-13) return 1e30;
  return 1.0 / (-lmin);
}

void assemble_model(const BlockLayout& blk, const VectorXd& xloc,
                    const VectorXd& xcor, MatrixXd& M) {
  M = blk.f0;
  for (int j = 0; j < blk.nloc(); ++j) {
    const double v = xloc(j);
    for (int i = blk.loc_off[j]; i < blk.loc_off[j + 1]; ++i)
      M(blk.loc_r[i], blk.loc_c[i]) += v;
  }
  for (int t = 0; t < blk.ncor(); ++t) {
    const double v = xcor(blk.corner_col[t]);
    for (int i = blk.cor_off[t]; i < blk.cor_off[t + 1]; ++i)
      M(blk.cor_r[i], blk.cor_c[i]) += v;
  }
}

double dot_flat(const MatrixXd& T, const std::vector<int>& off,
                const std::vector<int>& rr, const std::vector<int>& cc,
                int j) {
  double s = 0.0;
  for (int i = off[j]; i < off[j + 1]; ++i) s += T(rr[i], cc[i]);
  return s;
}

struct BlockWork {
  MatrixXd X, Z, G, Zinv, Rp;
  MatrixXd D, Bt, Y, W;  // Schur pieces and eliminated couplings
  Eigen::LLT<MatrixXd> dllt;
  VectorXd rd_loc, g_loc, u0;
  MatrixXd T;  // G (Rc - Rp) G per direction solve
  MatrixXd dX, dZ, dXa, dZa;
  MatrixXd Zc;  // scratch for the exact-feasibility dual repair
};

// Exactly dual-feasible point found by repairing an iterate, and the value
// it certifies.  The reported bound is this value whenever one exists: the
// raw dual objective of a merely tolerance-feasible iterate can exceed the
// true optimum by the residual times the largest moment magnitude.
struct CertifiedDual {
  bool valid = false;
  double dobj = -1e300;
  VectorXd y;
  std::vector<MatrixXd> Z;
};

// Iterate snapshot used to report the best point seen when the iteration
// cannot be driven all the way to the target tolerance.
struct Snapshot {
  bool valid = false;
  double score = 1e300;    // max(relative gap, scaled residual)
  double gap_rel = 1e300;  // the two components, kept for tiered acceptance
  double res_rel = 1e300;
  double pobj = 0.0, dobj = 0.0;
  VectorXd x_cor, y;
  std::vector<VectorXd> x_loc;
  std::vector<MatrixXd> X, Z;
};

}  // namespace

long sdp_solve_count() { return g_solve_count.load(); }

SdpResult solve_sdp(const SdpProblem& problem, const SdpOptions& opts) {
  g_solve_count.fetch_add(1);
  const Layout L = detail::build_layout(problem);
  const int nb = static_cast<int>(L.blocks.size());
  const int ns = L.ns;
  const int nr = L.nr;

  SdpResult res;
  res.moments.assign(L.num_moments, 0.0);
  res.dual_weight.assign(L.num_moments, 0.0);
  res.equality_dual.assign(nr, 0.0);

  std::vector<BlockWork> wk(nb);
  VectorXd x_cor = VectorXd::Zero(ns);
  std::vector<VectorXd> x_loc(nb);
  VectorXd y = VectorXd::Zero(nr);
  double ntot = 0.0;
  for (int b = 0; b < nb; ++b) {
    const int n = L.blocks[b].n;
    wk[b].X = MatrixXd::Identity(n, n);
    wk[b].Z = MatrixXd::Identity(n, n);
    x_loc[b] = VectorXd::Zero(L.blocks[b].nloc());
    ntot += n;
  }

  const VectorXd c_cor = Eigen::Map<const VectorXd>(L.c_corner.data(), ns);

  double pobj = 0.0, dobj = 0.0;
  SdpStatus status = SdpStatus::NumericalFailure;
  Snapshot best;
  CertifiedDual cert;
  int polish_left = -1;
  int polish_stall = 0;
  double polish_res = 1e300;
  int iter = 0;
  bool converged = false;

  // Exact dual residuals at the current (y, Z), for certification attempts
  // outside the main loop (the loop computes them inline each iteration).
  auto dual_residuals = [&](VectorXd& rdc) {
    rdc = c_cor - L.a_corner.transpose() * y;
    for (int b = 0; b < nb; ++b) {
      const BlockLayout& blk = L.blocks[b];
      BlockWork& w = wk[b];
      const VectorXd c_loc = Eigen::Map<const VectorXd>(
          L.c_local[b].data(), static_cast<long>(L.c_local[b].size()));
      w.rd_loc = c_loc - L.a_local[b].transpose() * y;
      for (int j = 0; j < blk.nloc(); ++j)
        w.rd_loc(j) -= dot_flat(w.Z, blk.loc_off, blk.loc_r, blk.loc_c, j);
      for (int t = 0; t < blk.ncor(); ++t)
        rdc(blk.corner_col[t]) -=
            dot_flat(w.Z, blk.cor_off, blk.cor_r, blk.cor_c, t);
    }
  };

  // Try to turn the current iterate into an exactly dual-feasible point.
  // Each free moment owns a disjoint set of matrix positions, so a
  // correction hitting every residual exactly can spread each one over its
  // moment's positions; weighting a position by sqrt(Z_rr Z_cc) puts the
  // shift where the matrix has room for it, since that is the scale of
  // off-diagonal mass a positive matrix tolerates.  The shifted iterate
  // certifies a true lower bound whenever every block stays positive
  // definite.  Expects w.rd_loc and rd_cor_in to hold the exact residuals
  // of the current iterate.
  auto attempt_certificate = [&](const VectorXd& rd_cor_in) {
    bool psd = true;
    double dcert = L.rhs.dot(y);
    std::vector<VectorXd> sd(nb);
    VectorXd cor_wsum = VectorXd::Zero(ns);
    for (int b = 0; b < nb; ++b) {
      const BlockLayout& blk = L.blocks[b];
      sd[b] = wk[b].Z.diagonal().cwiseMax(0.0).cwiseSqrt();
      for (int t = 0; t < blk.ncor(); ++t)
        for (int k = blk.cor_off[t]; k < blk.cor_off[t + 1]; ++k)
          cor_wsum(blk.corner_col[t]) +=
              sd[b](blk.cor_r[k]) * sd[b](blk.cor_c[k]);
    }
    for (int b = 0; b < nb && psd; ++b) {
      const BlockLayout& blk = L.blocks[b];
      BlockWork& w = wk[b];
      w.Zc = w.Z;
      for (int j = 0; j < blk.nloc(); ++j) {
        const int n0 = blk.loc_off[j], n1 = blk.loc_off[j + 1];
        double wsum = 0.0;
        for (int k = n0; k < n1; ++k)
          wsum += sd[b](blk.loc_r[k]) * sd[b](blk.loc_c[k]);
        if (!(wsum > 0.0)) {
          psd = false;
          break;
        }
        const double scl = w.rd_loc(j) / wsum;
        for (int k = n0; k < n1; ++k)
          w.Zc(blk.loc_r[k], blk.loc_c[k]) +=
              scl * sd[b](blk.loc_r[k]) * sd[b](blk.loc_c[k]);
      }
      if (!psd) break;
      for (int t = 0; t < blk.ncor(); ++t) {
        const int col = blk.corner_col[t];
        if (!(cor_wsum(col) > 0.0)) {
          psd = false;
          break;
        }
        const double scl = rd_cor_in(col) / cor_wsum(col);
        for (int k = blk.cor_off[t]; k < blk.cor_off[t + 1]; ++k)
          w.Zc(blk.cor_r[k], blk.cor_c[k]) +=
              scl * sd[b](blk.cor_r[k]) * sd[b](blk.cor_c[k]);
      }
      if (!psd) break;
      Eigen::LLT<MatrixXd> ll(w.Zc);
      if (ll.info() != Eigen::Success) {
        psd = false;
        break;
      }
      dcert -= (blk.f0.array() * w.Zc.array()).sum();
    }
    if (psd && dcert > cert.dobj) {
      cert.valid = true;
      cert.dobj = dcert;
      cert.y = y;
      cert.Z.resize(nb);
      for (int b = 0; b < nb; ++b) cert.Z[b] = wk[b].Zc;
    }
    return psd;
  };

  // Snapshot of the accepted iterate taken when the polish phase starts,
  // so an unhelpful polish can be undone, plus the lowest-residual iterate
  // reached while polishing, which is the state actually kept at the end.
  Snapshot entry;
  Snapshot pbest;
  auto enter_polish = [&](double pobj_now, double dobj_now) {
    entry.valid = true;
    entry.pobj = pobj_now;
    entry.dobj = dobj_now;
    entry.x_cor = x_cor;
    entry.y = y;
    entry.x_loc = x_loc;
    entry.Z.resize(nb);
    for (int b = 0; b < nb; ++b) entry.Z[b] = wk[b].Z;
    status = SdpStatus::Optimal;
    converged = true;
    polish_left = 20;
    polish_stall = 0;
    polish_res = 1e300;
  };

  // The iteration hit numerical trouble (stall, breakdown, tiny steps).
  // If the best iterate seen is close enough to matter at the
  // certification scale, restore it, accept it, and switch to feasibility
  // polish from there; the caller continues the loop.  Returns false when
  // the run must end instead — no acceptable iterate, or already
  // polishing.
  auto accept_and_polish = [&]() {
    if (polish_left >= 0 || !best.valid || best.score > 5e-6) return false;
    x_cor = best.x_cor;
    y = best.y;
    x_loc = best.x_loc;
    for (int b = 0; b < nb; ++b) {
      wk[b].X = best.X[b];
      wk[b].Z = best.Z[b];
    }
    enter_polish(best.pobj, best.dobj);
    return true;
  };
  double progress_ref = 1e300;
  int progress_iter = 0;
  double res_ref = 1e300;
  int res_iter = 0;
  double last_res_p = 1e300, last_res_d = 1e300, last_res_e = 1e300;
  double last_z_max = 0.0, last_x_max = 0.0;
  // Divergence-ray trend counters: consecutive iterations in which one
  // objective runs away while the opposite residual refuses to drop.
  double trend_pobj = 0.0, trend_dobj = 0.0;
  int ray_up = 0, ray_down = 0;

  for (iter = 0; iter < opts.max_iter; ++iter) {
    // Residuals and objective values at the current iterate.
    double res_p = 0.0, res_d = 0.0, res_e = 0.0;
    double z_max = 0.0;
    double x_max = x_cor.size() ? x_cor.cwiseAbs().maxCoeff() : 0.0;
    pobj = c_cor.dot(x_cor);
    dobj = L.rhs.dot(y);
    VectorXd rd_cor = c_cor - L.a_corner.transpose() * y;
    VectorXd re = L.rhs - L.a_corner * x_cor;
    for (int b = 0; b < nb; ++b) {
      const BlockLayout& blk = L.blocks[b];
      BlockWork& w = wk[b];
      MatrixXd model(blk.n, blk.n);
      assemble_model(blk, x_loc[b], x_cor, model);
      w.Rp = model - w.X;
      res_p = std::max(res_p, w.Rp.cwiseAbs().maxCoeff());
      const VectorXd c_loc = Eigen::Map<const VectorXd>(
          L.c_local[b].data(), static_cast<long>(L.c_local[b].size()));
      pobj += c_loc.dot(x_loc[b]);
      dobj -= (blk.f0.array() * w.Z.array()).sum();
      w.rd_loc = c_loc - L.a_local[b].transpose() * y;
      for (int j = 0; j < blk.nloc(); ++j)
        w.rd_loc(j) -= dot_flat(w.Z, blk.loc_off, blk.loc_r, blk.loc_c, j);
      for (int t = 0; t < blk.ncor(); ++t)
        rd_cor(blk.corner_col[t]) -=
            dot_flat(w.Z, blk.cor_off, blk.cor_r, blk.cor_c, t);
      re -= L.a_local[b] * x_loc[b];
      if (blk.nloc()) res_d = std::max(res_d, w.rd_loc.cwiseAbs().maxCoeff());
      z_max = std::max(z_max, w.Z.cwiseAbs().maxCoeff());
      if (x_loc[b].size())
        x_max = std::max(x_max, x_loc[b].cwiseAbs().maxCoeff());
    }
    if (ns) res_d = std::max(res_d, rd_cor.cwiseAbs().maxCoeff());
    if (nr) res_e = re.cwiseAbs().maxCoeff();

    double mu = 0.0;
    for (int b = 0; b < nb; ++b)
      mu += (wk[b].X.array() * wk[b].Z.array()).sum();
    mu /= ntot;

    const double scale = 1.0 + std::max(std::abs(pobj), std::abs(dobj));
    const double gap_rel = std::abs(pobj - dobj) / scale;
    const double res_norm = std::max({res_p, res_d, res_e});
    const double score = std::max(gap_rel, res_norm / scale);
    last_res_p = res_p;
    last_res_d = res_d;
    last_res_e = res_e;
    last_z_max = z_max;
    last_x_max = x_max;
    if (iter > 0) {
      if (dobj > trend_dobj + std::max(1.0, 0.25 * std::abs(trend_dobj)) &&
          std::max(res_p, res_e) / (1.0 + x_max) > 1e-5)
        ++ray_up;
      else
        ray_up = 0;
      if (pobj < trend_pobj - std::max(1.0, 0.25 * std::abs(trend_pobj)) &&
          res_d / (1.0 + z_max) > 1e-5)
        ++ray_down;
      else
        ray_down = 0;
    }
    trend_pobj = pobj;
    trend_dobj = dobj;

    if (opts.verbose) {
      std::fprintf(stderr,
                   "  it %3d  mu %.3e  pobj % .9e  dobj % .9e  res %.2e\n",
                   iter, mu, pobj, dobj, res_norm);
    }

    if (score < best.score && std::abs(dobj) < 1e7 && std::abs(pobj) < 1e7) {
      best.valid = true;
      best.score = score;
      best.gap_rel = gap_rel;
      best.res_rel = res_norm / scale;
      best.pobj = pobj;
      best.dobj = dobj;
      best.x_cor = x_cor;
      best.y = y;
      best.x_loc = x_loc;
      best.X.resize(nb);
      best.Z.resize(nb);
      for (int b = 0; b < nb; ++b) {
        best.X[b] = wk[b].X;
        best.Z[b] = wk[b].Z;
      }
    }

    if (polish_left < 0 && gap_rel <= opts.tol &&
        res_norm <= opts.feas_tol * scale) {
      // Converged at the working tolerance.  Before returning, polish the
      // iterate towards exact dual feasibility: the reported bound is the
      // dual objective, and a residual at the tolerance level times the
      // largest moment magnitude is slop the certificate would carry.
      enter_polish(pobj, dobj);
    }
    if (polish_left >= 0) {
      if (res_norm < pbest.score) {
        pbest.valid = true;
        pbest.score = res_norm;
        pbest.pobj = pobj;
        pbest.dobj = dobj;
        pbest.x_cor = x_cor;
        pbest.y = y;
        pbest.x_loc = x_loc;
        pbest.X.resize(nb);
        pbest.Z.resize(nb);
        for (int b = 0; b < nb; ++b) {
          pbest.X[b] = wk[b].X;
          pbest.Z[b] = wk[b].Z;
        }
      }
      if (attempt_certificate(rd_cor) || polish_left == 0) break;
      if (res_norm <= 1e-12 * scale) break;
      // Stop polishing once the residual stops shrinking for a few steps
      // in a row; every further centering step costs a full factorization.
      if (res_norm > 0.97 * polish_res) {
        if (++polish_stall >= 3) break;
      } else {
        polish_stall = 0;
      }
      polish_res = std::min(polish_res, res_norm);
      --polish_left;
    } else {
      if (dobj > 1e6 && res_d / (1.0 + z_max) <= 1e-7) {
        status = SdpStatus::PrimalInfeasible;
        converged = true;
        break;
      }
      if (pobj < -1e6 && std::max(res_p, res_e) / (1.0 + x_max) <= 1e-7) {
        status = SdpStatus::Unbounded;
        converged = true;
        break;
      }
      if (mu < 1e-14 && iter > 5) {
        if (accept_and_polish()) continue;
        break;
      }
      // Degenerate problems can hover just above the target without the
      // iterate improving; give up once a dozen iterations pass in which
      // neither the score nor the residual shrinks meaningfully, and fall
      // back to the best iterate.  Either one still moving means the crawl
      // is real progress, just slow.
      if (score < 0.7 * progress_ref) {
        progress_ref = score;
        progress_iter = iter;
      }
      if (res_norm < 0.85 * res_ref) {
        res_ref = res_norm;
        res_iter = iter;
      }
      if (iter - progress_iter >= 12 && iter - res_iter >= 12 && best.valid) {
        if (accept_and_polish()) continue;
        break;
      }
    }

    // Scaling matrices.
    bool scale_ok = true;
    for (int b = 0; b < nb; ++b) {
      BlockWork& w = wk[b];
      Eigen::LLT<MatrixXd> lx(w.X), lz(w.Z);
      if (lx.info() != Eigen::Success || lz.info() != Eigen::Success) {
        scale_ok = false;
        break;
      }
      MatrixXd Mt = lx.matrixL().transpose() * w.Z * lx.matrixL();
      Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (Mt + Mt.transpose()));
      if (es.info() != Eigen::Success) {
        scale_ok = false;
        break;
      }
      const VectorXd lam = es.eigenvalues().cwiseMax(1e-300);
      // G = W^-1 for the scaling point W satisfying W Z W = X:
      // W^-1 = Lx^-T Q sqrt(lam) Q^T Lx^-1.
      MatrixXd R = es.eigenvectors() * lam.cwiseSqrt().asDiagonal() *
                   es.eigenvectors().transpose();
      MatrixXd G1 = lx.matrixL().transpose().solve(R);
      MatrixXd G2 = lx.matrixL().transpose().solve(G1.transpose());
      w.G = 0.5 * (G2 + G2.transpose());  // exact symmetry for the kernels
      MatrixXd Zi =
          lz.matrixL().solve(MatrixXd::Identity(w.Z.rows(), w.Z.cols()));
      w.Zinv = Zi.transpose() * Zi;
    }
    if (!scale_ok) {
      if (accept_and_polish()) continue;
      break;
    }

    // Schur complement pieces, factored blockwise.
    MatrixXd C = MatrixXd::Zero(ns, ns);
    bool factor_ok = true;
    for (int b = 0; b < nb; ++b) {
      const BlockLayout& blk = L.blocks[b];
      BlockWork& w = wk[b];
      const int nloc = blk.nloc();
      w.D.resize(nloc, nloc);
      w.Bt.resize(ns, nloc);
      if (opts.serial_schur)
        detail::schur_block_reference(blk, w.G, w.D, w.Bt, C);
      else
        detail::schur_block_fast(blk, w.G, w.D, w.Bt, C, opts.threads);
      w.dllt.compute(w.D);
      if (w.dllt.info() != Eigen::Success && nloc > 0) {
        w.D.diagonal().array() += 1e-12 * (1.0 + w.D.diagonal().maxCoeff());
        w.dllt.compute(w.D);
        if (w.dllt.info() != Eigen::Success) {
          factor_ok = false;
          break;
        }
      }
      w.Y = w.dllt.solve(w.Bt.transpose());
      w.W = w.dllt.solve(L.a_local[b].transpose());
    }
    if (!factor_ok) break;

    // Corner system (shared moments + equality multipliers).
    const int nc = ns + nr;
    MatrixXd K(nc, nc);
    Eigen::FullPivLU<MatrixXd> klu;
    if (nc) {
      K.setZero();
      K.topLeftCorner(ns, ns) = C;
      K.topRightCorner(ns, nr) = -L.a_corner.transpose();
      K.bottomLeftCorner(nr, ns) = L.a_corner;
      for (int b = 0; b < nb; ++b) {
        K.topLeftCorner(ns, ns) -= wk[b].Bt * wk[b].Y;
        K.topRightCorner(ns, nr) += wk[b].Bt * wk[b].W;
        K.bottomLeftCorner(nr, ns) -= L.a_local[b] * wk[b].Y;
        K.bottomRightCorner(nr, nr) += L.a_local[b] * wk[b].W;
      }
      klu.compute(K);
      if (!klu.isInvertible()) {
        if (accept_and_polish()) continue;
        break;
      }
    }

    VectorXd dx_cor(ns), dy(nr);
    std::vector<VectorXd> dx_loc(nb);
    // Complementarity right-hand side; the corrector subtracts the
    // second-order error of the affine step (Mehrotra's correction).
    auto comp_rhs = [&](BlockWork& w, double sigma_mu, bool second_order) {
      MatrixXd Rc = sigma_mu * w.Zinv - w.X;
      if (second_order) {
        MatrixXd M2 = w.dXa * w.dZa * w.Zinv;
        Rc -= 0.5 * (M2 + M2.transpose());
      }
      return Rc;
    };
    auto direction = [&](double sigma_mu, bool store_affine,
                         bool second_order) {
      VectorXd g_cor = -rd_cor;
      VectorXd rhs_e = re;
      for (int b = 0; b < nb; ++b) {
        const BlockLayout& blk = L.blocks[b];
        BlockWork& w = wk[b];
        MatrixXd Rc = comp_rhs(w, sigma_mu, second_order);
        w.T = w.G * (Rc - w.Rp) * w.G;
        w.T = 0.5 * (w.T + w.T.transpose());
        w.g_loc.resize(blk.nloc());
        for (int j = 0; j < blk.nloc(); ++j)
          w.g_loc(j) = dot_flat(w.T, blk.loc_off, blk.loc_r, blk.loc_c, j) -
                       w.rd_loc(j);
        for (int t = 0; t < blk.ncor(); ++t)
          g_cor(blk.corner_col[t]) +=
              dot_flat(w.T, blk.cor_off, blk.cor_r, blk.cor_c, t);
        w.u0 = w.dllt.solve(w.g_loc);
        g_cor -= w.Bt * w.u0;
        rhs_e -= L.a_local[b] * w.u0;
      }
      if (nc) {
        VectorXd rhs(nc);
        rhs.head(ns) = g_cor;
        rhs.tail(nr) = rhs_e;
        const VectorXd sol = klu.solve(rhs);
        dx_cor = sol.head(ns);
        dy = sol.tail(nr);
      } else {
        dx_cor.resize(0);
        dy.resize(0);
      }
      for (int b = 0; b < nb; ++b) {
        const BlockLayout& blk = L.blocks[b];
        BlockWork& w = wk[b];
        dx_loc[b] = w.u0 - w.Y * dx_cor + w.W * dy;
        MatrixXd mdx = MatrixXd::Zero(blk.n, blk.n);
        for (int j = 0; j < blk.nloc(); ++j) {
          const double v = dx_loc[b](j);
          for (int i = blk.loc_off[j]; i < blk.loc_off[j + 1]; ++i)
            mdx(blk.loc_r[i], blk.loc_c[i]) += v;
        }
        for (int t = 0; t < blk.ncor(); ++t) {
          const double v = dx_cor(blk.corner_col[t]);
          for (int i = blk.cor_off[t]; i < blk.cor_off[t + 1]; ++i)
            mdx(blk.cor_r[i], blk.cor_c[i]) += v;
        }
        w.dX = mdx + w.Rp;
        MatrixXd Rc = comp_rhs(w, sigma_mu, second_order);
        w.dZ = w.G * (Rc - w.dX) * w.G;
        w.dZ = 0.5 * (w.dZ + w.dZ.transpose());
        if (store_affine) {
          w.dXa = w.dX;
          w.dZa = w.dZ;
        }
      }
    };

    if (polish_left >= 0) {
      // Feasibility polish: a pure centering step at the current mu keeps
      // the gap where it is while the step fraction wipes out the
      // residuals, carrying the iterate to where the exact-feasibility
      // repair above succeeds.
      direction(mu, false, false);
      double app = 1e30, adp = 1e30;
      for (int b = 0; b < nb; ++b) {
        app = std::min(app, max_step(wk[b].X, wk[b].dX));
        adp = std::min(adp, max_step(wk[b].Z, wk[b].dZ));
      }
      app = std::min(1.0, 0.98 * app);
      adp = std::min(1.0, 0.98 * adp);
      if (app <= 1e-10 && adp <= 1e-10) break;
      x_cor += app * dx_cor;
      y += adp * dy;
      for (int b = 0; b < nb; ++b) {
        x_loc[b] += app * dx_loc[b];
        wk[b].X += app * wk[b].dX;
        wk[b].Z += adp * wk[b].dZ;
      }
      continue;
    }

    // Predictor (affine) step picks the centering weight.
    direction(0.0, true, false);
    double ap = 1e30, ad = 1e30;
    for (int b = 0; b < nb; ++b) {
      ap = std::min(ap, max_step(wk[b].X, wk[b].dXa));
      ad = std::min(ad, max_step(wk[b].Z, wk[b].dZa));
    }
    ap = std::min(1.0, 0.98 * ap);
    ad = std::min(1.0, 0.98 * ad);
    double mu_aff = 0.0;
    for (int b = 0; b < nb; ++b)
      mu_aff += ((wk[b].X + ap * wk[b].dXa).array() *
                 (wk[b].Z + ad * wk[b].dZa).array())
                    .sum();
    mu_aff = std::max(mu_aff / ntot, 0.0);
    // Cap the centering weight away from 1: a blocked affine step would
    // otherwise freeze mu and the iteration with it.
    double sigma = std::pow(mu_aff / mu, 3);
    sigma = std::min(std::max(sigma, 1e-6), 0.9);

    // Centered direction and the actual step.
    direction(sigma * mu, false, true);
    ap = 1e30;
    ad = 1e30;
    for (int b = 0; b < nb; ++b) {
      ap = std::min(ap, max_step(wk[b].X, wk[b].dX));
      ad = std::min(ad, max_step(wk[b].Z, wk[b].dZ));
    }
    ap = std::min(1.0, 0.98 * ap);
    ad = std::min(1.0, 0.98 * ad);
    if (std::min(ap, ad) < 0.05) {
      // Both corrected directions are blocked by the cone boundary; fall
      // back to a pure recentering direction at the current mu, which
      // reopens room for the next predictor.
      direction(mu, false, false);
      ap = 1e30;
      ad = 1e30;
      for (int b = 0; b < nb; ++b) {
        ap = std::min(ap, max_step(wk[b].X, wk[b].dX));
        ad = std::min(ad, max_step(wk[b].Z, wk[b].dZ));
      }
      ap = std::min(1.0, 0.98 * ap);
      ad = std::min(1.0, 0.98 * ad);
    }
    if (ap <= 1e-10 && ad <= 1e-10) {
      if (accept_and_polish()) continue;
      break;
    }

    x_cor += ap * dx_cor;
    y += ad * dy;
    for (int b = 0; b < nb; ++b) {
      x_loc[b] += ap * dx_loc[b];
      wk[b].X += ap * wk[b].dX;
      wk[b].Z += ad * wk[b].dZ;
    }
  }

  // The iteration can break down right as a divergence ray takes off;
  // objective magnitudes of 1e4 are orders beyond anything a well-posed
  // problem in this library produces (entropies, Bell scores and
  // probabilities are all O(1)), so classify those exits by their ray.
  if (!converged && dobj > 1e4 && last_res_d / (1.0 + last_z_max) <= 1e-6) {
    status = SdpStatus::PrimalInfeasible;
    converged = true;
  }
  if (!converged && pobj < -1e4 &&
      std::max(last_res_p, last_res_e) / (1.0 + last_x_max) <= 1e-6) {
    status = SdpStatus::Unbounded;
    converged = true;
  }
  // A breakdown exit can cut the ray off before it reaches those
  // magnitudes; a sustained geometric trend against a stuck residual is
  // the same evidence.  Only exits with no acceptable iterate qualify.
  const bool hopeless = !best.valid || best.score > 1e-3;
  if (!converged && hopeless && ray_up >= 3 && dobj > 50.0) {
    status = SdpStatus::PrimalInfeasible;
    converged = true;
  }
  if (!converged && hopeless && ray_down >= 3 && pobj < -50.0) {
    status = SdpStatus::Unbounded;
    converged = true;
  }

  // When the iteration stalled short of the strict tolerance, fall back to
  // the best iterate seen; accept it if it is close enough to matter at the
  // certification scale.  The reported bound always comes from the dual
  // side, so a small residual there keeps the result trustworthy and the
  // remaining gap is reported to the caller.
  if (!converged && best.valid) {
    pobj = best.pobj;
    dobj = best.dobj;
    x_cor = best.x_cor;
    y = best.y;
    x_loc = best.x_loc;
    for (int b = 0; b < nb; ++b) wk[b].Z = best.Z[b];
    // Strict acceptance keeps the certification scale.  A breakdown exit
    // can also strand an iterate that is feasible to high accuracy but a
    // little short on gap; its dual value is still a trustworthy bound
    // with the larger gap reported, so prefer it over discarding the
    // whole solve.
    const bool loose_ok = best.gap_rel <= 2.5e-4 && best.res_rel <= 1e-6;
    status = (best.score <= 5e-6 || loose_ok) ? SdpStatus::Optimal
                                              : SdpStatus::NumericalFailure;
    if (status == SdpStatus::Optimal) {
      VectorXd rdc;
      dual_residuals(rdc);
      attempt_certificate(rdc);
    }
  }

  // A polish run ends on whichever step tripped its stop rule; what it
  // keeps is the lowest-residual iterate it passed through.
  if (entry.valid && pbest.valid) {
    pobj = pbest.pobj;
    dobj = pbest.dobj;
    x_cor = pbest.x_cor;
    y = pbest.y;
    x_loc = pbest.x_loc;
    for (int b = 0; b < nb; ++b) wk[b].Z = pbest.Z[b];
  }

  // Swap in the certified dual point when one was found near the final
  // value: its bound is exact by construction, and the multipliers handed
  // to callers then belong to the same exactly-feasible point.  A far-off
  // certificate would cost more accuracy than the slop it removes, so it
  // is skipped.
  bool used_cert = false;
  if (status == SdpStatus::Optimal && cert.valid &&
      dobj - cert.dobj <= 1e-4 * (1.0 + std::abs(dobj))) {
    dobj = cert.dobj;
    y = cert.y;
    for (int b = 0; b < nb; ++b) wk[b].Z = cert.Z[b];
    used_cert = true;
  }

  // Polish is opportunistic: without an exact certificate it is only kept
  // when the polished pair still respects weak-duality ordering at the
  // reported precision.  Degenerate problems can drift the approximate
  // dual value above the primal one; those revert to the iterate accepted
  // when polish began.
  if (!used_cert && entry.valid &&
      dobj > pobj + 1e-9 * (1.0 + std::abs(pobj))) {
    pobj = entry.pobj;
    dobj = entry.dobj;
    x_cor = entry.x_cor;
    y = entry.y;
    x_loc = entry.x_loc;
    for (int b = 0; b < nb; ++b) wk[b].Z = entry.Z[b];
  }

  res.status = status;
  res.iterations = iter;
  res.primal = pobj;
  res.dual = dobj;
  res.gap = std::abs(pobj - dobj);
  res.equality_dual.assign(y.data(), y.data() + nr);
  for (auto [id, v] : L.fixed) res.moments[id] = v;
  for (int s = 0; s < ns; ++s) res.moments[L.corner_id[s]] = x_cor(s);
  for (int b = 0; b < nb; ++b) {
    const BlockLayout& blk = L.blocks[b];
    for (int j = 0; j < blk.nloc(); ++j)
      res.moments[blk.local_id[j]] = x_loc[b](j);
    for (std::size_t k = 0; k < blk.all.size(); ++k)
      res.dual_weight[blk.all_id[k]] +=
          detail::dot_positions(wk[b].Z, blk.all[k]);
  }
  return res;
}

}  // namespace diqkd
