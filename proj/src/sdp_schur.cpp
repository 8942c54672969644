// Copyright (c) 2026 the diqkd authors.
// Distributed under the MIT License (see LICENSE).

#include <omp.h>

#include "sdp_internal.hpp"

namespace diqkd::detail {

// Both kernels compute, for one PSD block with scaling matrix G,
//   D(a,b)  = <F_a, G F_b G>   over local moment pairs,
//   Bt(s,a) = <F_s, G F_a G>   corner x local,
//   C(s,t) += <F_s, G F_t G>   corner x corner,
// using tr(F G F' G) = sum over oriented positions (p,q) of F and (r,s) of
// F' of G(q,r) G(s,p).  Every coefficient matrix F has unit entries at its
// oriented positions, so the sums run over the position lists directly.
// The summation order (outer positions of the row moment, inner positions
// of the column moment) is identical in both kernels, which makes their
// results bitwise equal.

void schur_block_reference(const BlockLayout& blk, const Eigen::MatrixXd& G,
                           Eigen::MatrixXd& D, Eigen::MatrixXd& Bt,
                           Eigen::MatrixXd& C) {
  const int nloc = blk.nloc();
  const int ncor = blk.ncor();
  for (int a = 0; a < nloc; ++a) {
    for (int b = 0; b <= a; ++b) {
      double s = 0.0;
      for (int i = blk.loc_off[a]; i < blk.loc_off[a + 1]; ++i) {
        for (int j = blk.loc_off[b]; j < blk.loc_off[b + 1]; ++j) {
          s += G(blk.loc_c[i], blk.loc_r[j]) * G(blk.loc_c[j], blk.loc_r[i]);
        }
      }
      D(a, b) = s;
      D(b, a) = s;
    }
    for (int t = 0; t < ncor; ++t) {
      double s = 0.0;
      for (int i = blk.loc_off[a]; i < blk.loc_off[a + 1]; ++i) {
        for (int j = blk.cor_off[t]; j < blk.cor_off[t + 1]; ++j) {
          s += G(blk.loc_c[i], blk.cor_r[j]) * G(blk.cor_c[j], blk.loc_r[i]);
        }
      }
      Bt(blk.corner_col[t], a) = s;
    }
  }
  for (int u = 0; u < ncor; ++u) {
    for (int t = 0; t <= u; ++t) {
      double s = 0.0;
      for (int i = blk.cor_off[u]; i < blk.cor_off[u + 1]; ++i) {
        for (int j = blk.cor_off[t]; j < blk.cor_off[t + 1]; ++j) {
          s += G(blk.cor_c[i], blk.cor_r[j]) * G(blk.cor_c[j], blk.cor_r[i]);
        }
      }
      C(blk.corner_col[u], blk.corner_col[t]) += s;
      if (t != u) C(blk.corner_col[t], blk.corner_col[u]) += s;
    }
  }
}

void schur_block_fast(const BlockLayout& blk, const Eigen::MatrixXd& G,
                      Eigen::MatrixXd& D, Eigen::MatrixXd& Bt,
                      Eigen::MatrixXd& C, int threads) {
  const int nloc = blk.nloc();
  const int ncor = blk.ncor();
  const double* gd = G.data();
  const long n = G.rows();
  const long nbt = Bt.rows();
  const int* lr = blk.loc_r.data();
  const int* lc = blk.loc_c.data();
  const int* cr = blk.cor_r.data();
  const int* cc = blk.cor_c.data();
  const int nt = threads > 0 ? threads : omp_get_max_threads();

  // Matrices are column-major, so "column a" pointers below are
  // contiguous: D entries for pair (a, b<=a) land in the upper triangle as
  // D(b, a), corner entries in Bt(:, a).
#pragma omp parallel for schedule(dynamic, 8) num_threads(nt)
  for (int a = 0; a < nloc; ++a) {
    double* dcol = D.data() + static_cast<long>(a) * nloc;
    for (int b = 0; b <= a; ++b) dcol[b] = 0.0;
    double* bcol = Bt.data() + static_cast<long>(a) * nbt;
    for (long s = 0; s < nbt; ++s) bcol[s] = 0.0;
    for (int i = blk.loc_off[a]; i < blk.loc_off[a + 1]; ++i) {
      const double* gq = gd + static_cast<long>(lc[i]) * n;
      const double* gp = gd + static_cast<long>(lr[i]) * n;
      for (int b = 0; b <= a; ++b) {
        double s = dcol[b];
        for (int j = blk.loc_off[b]; j < blk.loc_off[b + 1]; ++j)
          s += gq[lr[j]] * gp[lc[j]];
        dcol[b] = s;
      }
      for (int t = 0; t < ncor; ++t) {
        double s = bcol[blk.corner_col[t]];
        for (int j = blk.cor_off[t]; j < blk.cor_off[t + 1]; ++j)
          s += gq[cr[j]] * gp[cc[j]];
        bcol[blk.corner_col[t]] = s;
      }
    }
  }
  for (int a = 0; a < nloc; ++a)
    for (int b = 0; b < a; ++b) D(a, b) = D(b, a);

  for (int u = 0; u < ncor; ++u) {
    for (int t = 0; t <= u; ++t) {
      double s = 0.0;
      for (int i = blk.cor_off[u]; i < blk.cor_off[u + 1]; ++i) {
        const double* gq = gd + static_cast<long>(cc[i]) * n;
        const double* gp = gd + static_cast<long>(cr[i]) * n;
        for (int j = blk.cor_off[t]; j < blk.cor_off[t + 1]; ++j)
          s += gq[cr[j]] * gp[cc[j]];
      }
      C(blk.corner_col[u], blk.corner_col[t]) += s;
      if (t != u) C(blk.corner_col[t], blk.corner_col[u]) += s;
    }
  }
}

}  // namespace diqkd::detail
