// Copyright (c) 2026 the diqkd authors.
// Distributed under the MIT License (see LICENSE).

#ifndef DIQKD_SDP_INTERNAL_HPP
#define DIQKD_SDP_INTERNAL_HPP

#include "diqkd/sdp.hpp"

#include <Eigen/Dense>
#include <vector>

namespace diqkd::detail {

// Oriented position list of one moment inside one block: every off-diagonal
// upper-triangle position is stored twice (mirrored), diagonals once, so
// that iterating the list touches each entry of the coefficient matrix F
// exactly once.
struct OrientedPositions {
  std::vector<int> r, c;
  std::size_t size() const { return r.size(); }
};

// One PSD block of the eliminated problem.  Free moments are separated into
// block-local ones (eliminated blockwise in the Schur solve) and corner
// ones (shared statistics moments, coupled across blocks).  Position lists
// of the hot kernels are stored flattened (offsets into one array).
struct BlockLayout {
  int n = 0;
  Eigen::MatrixXd f0;  // constant part from fixed moments

  // Local free moments, flattened oriented positions.
  std::vector<int> loc_off, loc_r, loc_c;
  std::vector<int> local_id;  // moment id per local index
  int nloc() const { return static_cast<int>(loc_off.size()) - 1; }

  // Corner moments present in this block, flattened, with their column.
  std::vector<int> cor_off, cor_r, cor_c;
  std::vector<int> corner_col;
  int ncor() const { return static_cast<int>(cor_off.size()) - 1; }

  // All moments of the block (any kind) for dual-weight extraction.
  std::vector<OrientedPositions> all;
  std::vector<int> all_id;
};

struct Layout {
  std::vector<BlockLayout> blocks;
  int ns = 0;                    // number of corner (shared free) moments
  std::vector<int> corner_id;    // moment id per corner column
  std::vector<double> c_corner;  // objective on corner moments
  std::vector<std::vector<double>> c_local;  // objective per block/local idx

  // Equality rows, split into corner and per-block local columns.
  int nr = 0;
  Eigen::MatrixXd a_corner;              // nr x ns
  std::vector<Eigen::MatrixXd> a_local;  // nr x nloc_b per block
  Eigen::VectorXd rhs;

  std::vector<std::pair<int, double>> fixed;  // validated copy
  int num_moments = 0;
};

Layout build_layout(const SdpProblem& problem);

// <F_mom, T> for symmetric T.
inline double dot_positions(const Eigen::MatrixXd& T,
                            const OrientedPositions& p) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += T(p.r[i], p.c[i]);
  return s;
}

// Schur complement pieces of one block for scaling matrix G:
//   D(a,b) = <F_a, G F_b G>   over local moments,
//   B(a,s) = <F_a, G F_s G>   local x corner column (full corner width),
//   C(s,t) += <F_s, G F_t G>  corner x corner (accumulated).
// The reference kernel is a plain serial implementation close to the
// defining formula; the fast kernel flattens index arithmetic and
// parallelizes rows with OpenMP, and must produce bitwise-identical
// results.
void schur_block_reference(const BlockLayout& blk, const Eigen::MatrixXd& G,
                           Eigen::MatrixXd& D, Eigen::MatrixXd& B,
                           Eigen::MatrixXd& C);
void schur_block_fast(const BlockLayout& blk, const Eigen::MatrixXd& G,
                      Eigen::MatrixXd& D, Eigen::MatrixXd& B,
                      Eigen::MatrixXd& C, int threads);

}  // namespace diqkd::detail

#endif
