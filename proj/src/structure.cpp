// Copyright (c) 2026 the diqkd authors.
// Distributed under the MIT License (see LICENSE).

#include "diqkd/structure.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace diqkd {
namespace {

// All products of at most `level` letters from the given Z alphabet,
// identity first, in a deterministic order.
std::vector<Word> eve_words(const std::vector<int>& letters, int level) {
  std::vector<Word> out{word_identity()};
  std::size_t first = 0;
  for (int len = 1; len <= level; ++len) {
    const std::size_t last = out.size();
    for (std::size_t i = first; i < last; ++i) {
      for (int l : letters) {
        for (int adj = 0; adj < 2; ++adj) {
          out.push_back(multiply(out[i], word_z(l, adj != 0)));
        }
      }
    }
    first = last;
  }
  return out;
}

void find_cg_ids(StructureBlock& blk) {
  const std::array<Word, 9> probes = {
      word_identity(),
      word_a(1),
      word_a(2),
      word_b(1),
      word_b(2),
      multiply(word_a(1), word_b(1)),
      multiply(word_a(1), word_b(2)),
      multiply(word_a(2), word_b(1)),
      multiply(word_a(2), word_b(2)),
  };
  for (int i = 0; i < 9; ++i) {
    auto it = blk.index.find(probes[i]);
    blk.cg[i] = it == blk.index.end() ? -1 : it->second;
  }
}

}  // namespace

MomentStructure build_structure(const std::vector<Word>& monomials_ab, int m,
                                HierarchyMode mode, bool joint,
                                int eve_level) {
  if (m < 1) throw std::invalid_argument("node count must be positive");
  if (eve_level < 1) throw std::invalid_argument("eve_level must be positive");
  if (monomials_ab.empty() ||
      std::find(monomials_ab.begin(), monomials_ab.end(), word_identity()) ==
          monomials_ab.end()) {
    throw std::invalid_argument("monomial list must contain the identity");
  }
  {
    std::set<Word> seen(monomials_ab.begin(), monomials_ab.end());
    if (seen.size() != monomials_ab.size()) {
      throw std::invalid_argument("monomial list contains duplicates");
    }
  }

  MomentStructure S;
  S.mode = mode;
  S.joint = joint;
  S.m = m;
  S.eve_level = eve_level;
  S.ab_words = monomials_ab;

  const int letters_per_node = joint ? 4 : 2;
  const int num_blocks = mode == HierarchyMode::Full ? 1 : m;
  S.blocks.resize(num_blocks);

  // Row words and entry words per block.
  std::vector<std::vector<Word>> entry_words(num_blocks);
  for (int bi = 0; bi < num_blocks; ++bi) {
    StructureBlock& blk = S.blocks[bi];
    if (mode == HierarchyMode::Full) {
      blk.nodes.resize(m);
      for (int i = 0; i < m; ++i) blk.nodes[i] = i;
    } else {
      blk.nodes = {bi};
    }
    std::vector<int> letters;
    for (int node : blk.nodes) {
      for (int k = 0; k < letters_per_node; ++k) {
        letters.push_back(node * letters_per_node + k);
      }
    }
    const std::vector<Word> ew = eve_words(letters, eve_level);
    for (const Word& u : monomials_ab) {
      for (const Word& e : ew) blk.rows.push_back(multiply(u, e));
    }
    blk.n = static_cast<int>(blk.rows.size());
    entry_words[bi].resize(static_cast<std::size_t>(blk.n) * blk.n);
    for (int r = 0; r < blk.n; ++r) {
      const Word row_adj = adjoint(blk.rows[r]);
      for (int c = r; c < blk.n; ++c) {
        Word w = fold(multiply(row_adj, blk.rows[c]));
        entry_words[bi][r * blk.n + c] = w;
        entry_words[bi][c * blk.n + r] = std::move(w);
      }
    }
  }

  // Assign ids: shared Z-free moments first (sorted), then per-block locals
  // (sorted within each block).  Split mode shares nothing.
  int next_id = 0;
  if (mode != HierarchyMode::Split) {
    std::set<Word> shared;
    for (const auto& words : entry_words) {
      for (const Word& w : words) {
        if (w.is_z_free()) shared.insert(w);
      }
    }
    for (const Word& w : shared) S.shared_index.emplace(w, next_id++);
    S.num_shared = next_id;
  }
  for (int bi = 0; bi < num_blocks; ++bi) {
    StructureBlock& blk = S.blocks[bi];
    std::set<Word> locals;
    for (const Word& w : entry_words[bi]) {
      if (mode == HierarchyMode::Split || !w.is_z_free()) locals.insert(w);
    }
    blk.index = S.shared_index;  // empty for split mode
    for (const Word& w : locals) blk.index.emplace(w, next_id++);

    blk.entry_ids.resize(entry_words[bi].size());
    std::map<int, std::vector<std::pair<int, int>>> positions;
    for (int r = 0; r < blk.n; ++r) {
      for (int c = 0; c < blk.n; ++c) {
        const int id = blk.index.at(entry_words[bi][r * blk.n + c]);
        blk.entry_ids[r * blk.n + c] = id;
        if (r <= c) positions[id].emplace_back(r, c);
      }
    }
    blk.moments.reserve(positions.size());
    for (auto& [id, pos] : positions) {
      blk.moments.push_back(MomentPositions{id, std::move(pos)});
    }
    find_cg_ids(blk);
  }
  S.num_moments = next_id;
  return S;
}

}  // namespace diqkd
