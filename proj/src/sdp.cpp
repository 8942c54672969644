// Copyright (c) 2026 the diqkd authors.
// Distributed under the MIT License (see LICENSE).

#include "diqkd/sdp.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <stdexcept>

#include "sdp_internal.hpp"

namespace diqkd {
namespace detail {

namespace {

OrientedPositions orient(const std::vector<std::pair<int, int>>& upper) {
  OrientedPositions out;
  out.r.reserve(2 * upper.size());
  out.c.reserve(2 * upper.size());
  for (auto [r, c] : upper) {
    out.r.push_back(r);
    out.c.push_back(c);
    if (r != c) {
      out.r.push_back(c);
      out.c.push_back(r);
    }
  }
  return out;
}

void flat_append(std::vector<int>& off, std::vector<int>& rr,
                 std::vector<int>& cc, const OrientedPositions& p) {
  if (off.empty()) off.push_back(0);
  rr.insert(rr.end(), p.r.begin(), p.r.end());
  cc.insert(cc.end(), p.c.begin(), p.c.end());
  off.push_back(static_cast<int>(rr.size()));
}

}  // namespace

Layout build_layout(const SdpProblem& problem) {
  if (problem.structure == nullptr)
    throw std::invalid_argument("sdp: missing structure");
  const MomentStructure& S = *problem.structure;

  Layout L;
  L.num_moments = S.num_moments;

  auto check_id = [&](int id) {
    if (id < 0 || id >= S.num_moments)
      throw std::invalid_argument("sdp: moment id out of range");
  };

  std::vector<char> fixed_mask(S.num_moments, 0);
  for (auto [id, value] : problem.fixed) {
    check_id(id);
    (void)value;
    if (fixed_mask[id]) throw std::invalid_argument("sdp: moment fixed twice");
    fixed_mask[id] = 1;
  }
  L.fixed = problem.fixed;

  for (auto [id, coeff] : problem.objective) {
    check_id(id);
    (void)coeff;
    if (fixed_mask[id])
      throw std::invalid_argument("sdp: objective term on a fixed moment");
  }
  for (const LinearCombo& row : problem.equalities) {
    for (auto [id, coeff] : row.terms) {
      check_id(id);
      (void)coeff;
      if (fixed_mask[id])
        throw std::invalid_argument("sdp: equality term on a fixed moment");
    }
  }

  // Corner columns: free shared moments, in id order.
  std::vector<int> corner_col_of(S.num_moments, -1);
  for (int id = 0; id < S.num_shared; ++id) {
    if (!fixed_mask[id]) {
      corner_col_of[id] = L.ns++;
      L.corner_id.push_back(id);
    }
  }

  std::vector<double> fixed_value(S.num_moments, 0.0);
  for (auto [id, value] : problem.fixed) fixed_value[id] = value;

  std::map<int, double> obj;
  for (auto [id, coeff] : problem.objective) obj[id] += coeff;

  L.c_corner.assign(L.ns, 0.0);
  for (int s = 0; s < L.ns; ++s) {
    auto it = obj.find(L.corner_id[s]);
    if (it != obj.end()) L.c_corner[s] = it->second;
  }

  L.blocks.resize(S.blocks.size());
  L.c_local.resize(S.blocks.size());
  std::vector<std::vector<int>> local_index_of(S.blocks.size());
  for (std::size_t bi = 0; bi < S.blocks.size(); ++bi) {
    const StructureBlock& sb = S.blocks[bi];
    BlockLayout& blk = L.blocks[bi];
    blk.n = sb.n;
    blk.f0 = Eigen::MatrixXd::Zero(sb.n, sb.n);
    local_index_of[bi].assign(S.num_moments, -1);
    for (const MomentPositions& mp : sb.moments) {
      OrientedPositions op = orient(mp.pos);
      if (fixed_mask[mp.id]) {
        for (std::size_t i = 0; i < op.size(); ++i)
          blk.f0(op.r[i], op.c[i]) += fixed_value[mp.id];
      } else if (corner_col_of[mp.id] >= 0) {
        flat_append(blk.cor_off, blk.cor_r, blk.cor_c, op);
        blk.corner_col.push_back(corner_col_of[mp.id]);
      } else {
        local_index_of[bi][mp.id] = static_cast<int>(blk.local_id.size());
        flat_append(blk.loc_off, blk.loc_r, blk.loc_c, op);
        blk.local_id.push_back(mp.id);
      }
      blk.all.push_back(std::move(op));
      blk.all_id.push_back(mp.id);
    }
    if (blk.loc_off.empty()) blk.loc_off.push_back(0);
    if (blk.cor_off.empty()) blk.cor_off.push_back(0);
    L.c_local[bi].assign(blk.local_id.size(), 0.0);
    for (std::size_t j = 0; j < blk.local_id.size(); ++j) {
      auto it = obj.find(blk.local_id[j]);
      if (it != obj.end()) L.c_local[bi][j] = it->second;
    }
  }

  // Equality rows.
  L.nr = static_cast<int>(problem.equalities.size());
  L.a_corner = Eigen::MatrixXd::Zero(L.nr, L.ns);
  L.a_local.resize(S.blocks.size());
  for (std::size_t bi = 0; bi < S.blocks.size(); ++bi) {
    L.a_local[bi] = Eigen::MatrixXd::Zero(L.nr, L.blocks[bi].nloc());
  }
  L.rhs = Eigen::VectorXd::Zero(L.nr);
  for (int r = 0; r < L.nr; ++r) {
    const LinearCombo& row = problem.equalities[r];
    L.rhs(r) = row.rhs;
    for (auto [id, coeff] : row.terms) {
      if (corner_col_of[id] >= 0) {
        L.a_corner(r, corner_col_of[id]) += coeff;
        continue;
      }
      bool placed = false;
      for (std::size_t bi = 0; bi < S.blocks.size(); ++bi) {
        const int j = local_index_of[bi][id];
        if (j >= 0) {
          L.a_local[bi](r, j) += coeff;
          placed = true;
          break;
        }
      }
      if (!placed)
        throw std::invalid_argument("sdp: equality term on unknown moment");
    }
  }
  return L;
}

}  // namespace detail

void dump_sdp(const SdpProblem& problem, std::ostream& out) {
  if (problem.structure == nullptr)
    throw std::invalid_argument("sdp: missing structure");
  const MomentStructure& S = *problem.structure;
  out << "sdp-moment-problem 1\n";
  out << "moments " << S.num_moments << "\n";
  out << "blocks " << S.blocks.size() << "\n";
  for (const StructureBlock& blk : S.blocks) {
    out << "block " << blk.n << "\n";
    for (const MomentPositions& mp : blk.moments) {
      out << "  entry " << mp.id;
      for (auto [r, c] : mp.pos) out << " " << r << ":" << c;
      out << "\n";
    }
  }
  out << "fixed " << problem.fixed.size() << "\n";
  for (auto [id, v] : problem.fixed) out << "  " << id << " " << v << "\n";
  out << "objective " << problem.objective.size() << "\n";
  for (auto [id, c] : problem.objective) out << "  " << id << " " << c << "\n";
  out << "equalities " << problem.equalities.size() << "\n";
  for (const LinearCombo& row : problem.equalities) {
    out << "  rhs " << row.rhs;
    for (auto [id, c] : row.terms) out << " " << id << "*" << c;
    out << "\n";
  }
}

}  // namespace diqkd
