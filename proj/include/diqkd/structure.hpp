// Copyright (c) 2026 the diqkd authors.
// Distributed under the MIT License (see LICENSE).

#ifndef DIQKD_STRUCTURE_HPP
#define DIQKD_STRUCTURE_HPP

#include "diqkd/algebra.hpp"

#include <array>
#include <map>
#include <vector>

namespace diqkd {

enum class HierarchyMode { Full, Split, Block };

// One positive-semidefinite block of a moment-matrix relaxation: row words,
// the moment id of every entry, and per-moment position lists.
struct MomentPositions {
  int id = -1;
  // upper-triangle positions (r <= c) where the moment appears
  std::vector<std::pair<int, int>> pos;
};

struct StructureBlock {
  std::vector<Word> rows;
  int n = 0;
  std::vector<int> entry_ids;            // n * n, row-major
  std::vector<MomentPositions> moments;  // every id appearing in this block
  std::map<Word, int> index;             // folded word -> id, this block's view
  std::vector<int> nodes;                // quadrature nodes represented here

  // Moment ids of 1, A1, A2, B1, B2, A1B1, A1B2, A2B1, A2B2 in this block.
  std::array<int, 9> cg{};

  int id_at(int r, int c) const { return entry_ids[r * n + c]; }
};

// Index of a Collins-Gisin moment inside StructureBlock::cg.
enum CgMoment {
  kCgOne = 0,
  kCgA1,
  kCgA2,
  kCgB1,
  kCgB2,
  kCgA1B1,
  kCgA1B2,
  kCgA2B1,
  kCgA2B2
};

// Moment-matrix structure for the entropy hierarchies.  Rows of every block
// are products (AB monomial) x (Eve word); Eve words are all products of at
// most eve_level letters from the block's own Z alphabet, which is what
// makes the objective's words representable.  Hierarchy modes:
//  * Block: one block per quadrature node; Z-free moments share one id
//    across blocks (ids [0, num_shared)).
//  * Split: same blocks, but every block numbers all of its moments
//    privately, so the coupled solve decays into independent ones.
//  * Full:  a single block over the union of all nodes' letters.
struct MomentStructure {
  HierarchyMode mode = HierarchyMode::Block;
  bool joint = false;
  int m = 0;
  int eve_level = 1;
  std::vector<Word> ab_words;
  int num_moments = 0;
  int num_shared = 0;  // ids below this are Z-free and shared (0 for split)
  std::vector<StructureBlock> blocks;
  std::map<Word, int> shared_index;

  // Eve letter id for quadrature node i: outcome a, or outcome pair (a, b)
  // in joint mode.
  int z_letter(int node, int a, int b = 0) const {
    return joint ? 4 * node + 2 * a + b : 2 * node + a;
  }
};

// Builds the structure for the given A/B monomial list (which must contain
// the identity and be free of duplicates), node count m, mode and variant.
MomentStructure build_structure(const std::vector<Word>& monomials_ab, int m,
                                HierarchyMode mode, bool joint = false,
                                int eve_level = 1);

}  // namespace diqkd

#endif
