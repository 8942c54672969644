// Copyright (c) 2026 the diqkd authors.
// Distributed under the MIT License (see LICENSE).

#include "diqkd/structure.hpp"

#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include "doctest.h"

using namespace diqkd;

namespace {

// Assemble the moment matrix of one block for a given moment vector.
std::vector<double> assemble(const StructureBlock& blk,
                             const std::vector<double>& x) {
  std::vector<double> M(static_cast<std::size_t>(blk.n) * blk.n, 0.0);
  for (const MomentPositions& mp : blk.moments) {
    for (auto [r, c] : mp.pos) {
      M[r * blk.n + c] = x[mp.id];
      M[c * blk.n + r] = x[mp.id];
    }
  }
  return M;
}

// Moment vector whose matrix should be the identity: the identity moment
// and both orderings of Z Z+ on every letter are 1, everything else 0.
std::vector<double> identity_start(const MomentStructure& S) {
  std::vector<double> x(S.num_moments, 0.0);
  const int letters_per_node = S.joint ? 4 : 2;
  for (const StructureBlock& blk : S.blocks) {
    x[blk.cg[kCgOne]] = 1.0;
    for (int node : blk.nodes) {
      for (int k = 0; k < letters_per_node; ++k) {
        const int l = node * letters_per_node + k;
        const Word zdz = fold(multiply(word_z(l, true), word_z(l, false)));
        const Word zzd = fold(multiply(word_z(l, false), word_z(l, true)));
        x[blk.index.at(zdz)] = 1.0;
        x[blk.index.at(zzd)] = 1.0;
      }
    }
  }
  return x;
}

}  // namespace

TEST_CASE("per-node blocks have the documented shape") {
  const MomentStructure S = build_structure(ab_level1(), 4, HierarchyMode::Block);
  CHECK(S.blocks.size() == 4);
  CHECK(S.num_shared > 0);
  for (int bi = 0; bi < 4; ++bi) {
    const StructureBlock& blk = S.blocks[bi];
    CHECK(blk.n == 45);  // 9 monomials x (1 + 2 letters x 2 adjoint states)
    CHECK(blk.rows.size() == 45);
    CHECK(blk.nodes == std::vector<int>{bi});
    // First rows are the plain monomials, in order.
    CHECK(blk.rows[0].is_identity());
    // Every Collins-Gisin moment is present, shared, and Z-free.
    for (int k = 0; k < 9; ++k) {
      CHECK(blk.cg[k] >= 0);
      CHECK(blk.cg[k] < S.num_shared);
      CHECK(blk.cg[k] == S.blocks[0].cg[k]);
    }
  }
  // The identity moment sits at the (1-row, 1-row) entry.
  CHECK(S.blocks[2].id_at(0, 0) == S.blocks[2].cg[kCgOne]);
}

TEST_CASE("moment matrices are hermitian with consistent position lists") {
  for (bool joint : {false, true}) {
    const MomentStructure S =
        build_structure(ab_level1(), 3, HierarchyMode::Block, joint);
    std::set<int> seen_local;
    for (const StructureBlock& blk : S.blocks) {
      CHECK(blk.n == (joint ? 81 : 45));
      for (int r = 0; r < blk.n; ++r)
        for (int c = 0; c < blk.n; ++c)
          CHECK(blk.id_at(r, c) == blk.id_at(c, r));
      // Position lists cover the upper triangle exactly once.
      std::size_t covered = 0;
      for (const MomentPositions& mp : blk.moments) {
        for (auto [r, c] : mp.pos) {
          CHECK(r <= c);
          CHECK(blk.id_at(r, c) == mp.id);
        }
        covered += mp.pos.size();
        if (mp.id >= S.num_shared) {
          // Locals belong to exactly one block.
          CHECK(seen_local.insert(mp.id).second);
        }
      }
      CHECK(covered == static_cast<std::size_t>(blk.n) * (blk.n + 1) / 2);
    }
    // Ids are exactly [0, num_moments).
    std::set<int> all;
    for (const StructureBlock& blk : S.blocks)
      for (const MomentPositions& mp : blk.moments) all.insert(mp.id);
    CHECK(static_cast<int>(all.size()) == S.num_moments);
    CHECK(*all.begin() == 0);
    CHECK(*all.rbegin() == S.num_moments - 1);
  }
}

TEST_CASE("statistics moments share one id across blocks") {
  const MomentStructure S = build_structure(ab_level2(), 5, HierarchyMode::Block);
  // Every Z-free word gets the same id in every block that contains it,
  // and that id is below num_shared.
  for (const StructureBlock& blk : S.blocks) {
    for (const auto& [w, id] : blk.index) {
      if (w.is_z_free()) {
        CHECK(id < S.num_shared);
        CHECK(S.shared_index.at(w) == id);
      } else {
        CHECK(id >= S.num_shared);
      }
    }
  }
  // A Z letter of node 0 appears in block 0 only.
  const Word z0 = fold(word_z(0));
  CHECK(S.blocks[0].index.count(z0) == 1);
  for (int bi = 1; bi < 5; ++bi) CHECK(S.blocks[bi].index.count(z0) == 0);
}

TEST_CASE("split mode numbers every block privately") {
  const MomentStructure split =
      build_structure(ab_level1(), 3, HierarchyMode::Split);
  const MomentStructure single =
      build_structure(ab_level1(), 1, HierarchyMode::Block);
  CHECK(split.num_shared == 0);
  CHECK(split.shared_index.empty());
  CHECK(split.num_moments == 3 * single.num_moments);
  // Index sets are disjoint.
  std::set<int> seen;
  for (const StructureBlock& blk : split.blocks) {
    for (const auto& [w, id] : blk.index) {
      (void)w;
      CHECK(seen.insert(id).second);
    }
    // Each block still resolves its own statistics moments.
    for (int k = 0; k < 9; ++k) CHECK(blk.cg[k] >= 0);
  }
  CHECK(split.blocks[0].cg[kCgA1B1] != split.blocks[1].cg[kCgA1B1]);
}

TEST_CASE("full mode builds one block over all letters") {
  for (int m : {2, 6, 10}) {
    const MomentStructure S = build_structure(ab_level1(), m, HierarchyMode::Full);
    REQUIRE(S.blocks.size() == 1);
    CHECK(S.blocks[0].n == 9 * (1 + 4 * m));
    CHECK(S.blocks[0].nodes.size() == static_cast<std::size_t>(m));
  }
  const MomentStructure J =
      build_structure(ab_level1(), 2, HierarchyMode::Full, true);
  CHECK(J.blocks[0].n == 9 * (1 + 8 * 2));
}

TEST_CASE("block matrices embed as principal submatrices of the full one") {
  // The same entry word must get consistent values; verify by checking that
  // each block-mode row word also appears among full-mode rows and that the
  // induced entries agree as words (ids differ, words match).
  const MomentStructure B = build_structure(ab_level1(), 2, HierarchyMode::Block);
  const MomentStructure F = build_structure(ab_level1(), 2, HierarchyMode::Full);
  std::set<Word> full_rows(F.blocks[0].rows.begin(), F.blocks[0].rows.end());
  for (const StructureBlock& blk : B.blocks)
    for (const Word& r : blk.rows) CHECK(full_rows.count(r) == 1);
}

TEST_CASE("identity moment vector assembles to the identity matrix") {
  // Cheap global audit of entry ids and position lists: with the identity
  // and Z Z+ moments set to one, every block's matrix is exactly I.
  for (HierarchyMode mode :
       {HierarchyMode::Block, HierarchyMode::Split, HierarchyMode::Full}) {
    for (bool joint : {false, true}) {
      const MomentStructure S = build_structure(ab_level1(), 2, mode, joint);
      const std::vector<double> x = identity_start(S);
      for (const StructureBlock& blk : S.blocks) {
        const std::vector<double> M = assemble(blk, x);
        for (int r = 0; r < blk.n; ++r)
          for (int c = 0; c < blk.n; ++c)
            CHECK(M[r * blk.n + c] == (r == c ? 1.0 : 0.0));
      }
    }
  }
}

TEST_CASE("deeper Eve words are available as an escape hatch") {
  const MomentStructure S =
      build_structure(ab_level1(), 1, HierarchyMode::Block, false, 2);
  // 1 + 4 letters + 16 two-letter products per node.
  CHECK(S.blocks[0].n == 9 * 21);
  // Length-two Eve words appear in the entries.
  const Word zz = fold(multiply(word_z(0), word_z(1)));
  CHECK(S.blocks[0].index.count(zz) == 1);
}

TEST_CASE("structure builder rejects malformed input") {
  CHECK_THROWS_AS(build_structure({}, 2, HierarchyMode::Block),
                  std::invalid_argument);
  // Missing identity.
  CHECK_THROWS_AS(build_structure({word_a(1)}, 2, HierarchyMode::Block),
                  std::invalid_argument);
  // Duplicates.
  CHECK_THROWS_AS(
      build_structure({word_identity(), word_a(1), word_a(1)}, 2,
                      HierarchyMode::Block),
      std::invalid_argument);
  CHECK_THROWS_AS(build_structure(ab_level1(), 0, HierarchyMode::Block),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      build_structure(ab_level1(), 2, HierarchyMode::Block, false, 0),
      std::invalid_argument);
}
