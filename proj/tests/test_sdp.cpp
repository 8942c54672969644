// Copyright (c) 2026 the diqkd authors.
// Distributed under the MIT License (see LICENSE).

#include "diqkd/sdp.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "doctest.h"

using namespace diqkd;

namespace {

int id_of(const MomentStructure& S, const Word& w) {
  return S.blocks[0].index.at(fold(w));
}

// CHSH combination on the shared statistics moments.
std::vector<std::pair<int, double>> chsh_terms(const MomentStructure& S,
                                               double scale) {
  return {{S.blocks[0].cg[kCgA1B1], scale},
          {S.blocks[0].cg[kCgA1B2], scale},
          {S.blocks[0].cg[kCgA2B1], scale},
          {S.blocks[0].cg[kCgA2B2], -scale}};
}

}  // namespace

TEST_CASE("trivial minimization drives a free diagonal moment to zero") {
  const MomentStructure S =
      build_structure({word_identity()}, 1, HierarchyMode::Block);
  SdpProblem prob;
  prob.structure = &S;
  prob.fixed = {{S.blocks[0].cg[kCgOne], 1.0}};
  prob.objective = {{id_of(S, multiply(word_z(0, true), word_z(0))), 1.0}};
  const SdpResult res = solve_sdp(prob);
  REQUIRE(res.ok());
  CHECK(std::abs(res.primal) < 1e-7);
  CHECK(std::abs(res.dual) < 1e-7);
  CHECK(res.gap < 1e-7);
}

TEST_CASE("off-diagonal moment is bounded by the fixed diagonals") {
  // With <1> = 1 and <Z0+ Z0> = 1 fixed, the real part of <Z0> lies in
  // [-1, 1]; minimizing -<Z0> must return exactly -1.
  const MomentStructure S =
      build_structure({word_identity()}, 1, HierarchyMode::Block);
  SdpProblem prob;
  prob.structure = &S;
  prob.fixed = {{S.blocks[0].cg[kCgOne], 1.0},
                {id_of(S, multiply(word_z(0, true), word_z(0))), 1.0}};
  prob.objective = {{id_of(S, word_z(0)), -1.0}};
  const SdpResult res = solve_sdp(prob);
  REQUIRE(res.ok());
  CHECK(res.primal == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(res.dual <= res.primal + 1e-9);
  CHECK(res.moments[id_of(S, word_z(0))] ==
        doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("equality row pins a moment and the objective follows") {
  // Constrain <Z0> = 0.5; the diagonal <Z0+ Z0> can then be no smaller
  // than 0.25.
  const MomentStructure S =
      build_structure({word_identity()}, 1, HierarchyMode::Block);
  SdpProblem prob;
  prob.structure = &S;
  prob.fixed = {{S.blocks[0].cg[kCgOne], 1.0}};
  prob.objective = {{id_of(S, multiply(word_z(0, true), word_z(0))), 1.0}};
  prob.equalities = {{{{id_of(S, word_z(0)), 1.0}}, 0.5}};
  const SdpResult res = solve_sdp(prob);
  REQUIRE(res.ok());
  CHECK(res.primal == doctest::Approx(0.25).epsilon(1e-5));
  CHECK(res.moments[id_of(S, word_z(0))] ==
        doctest::Approx(0.5).epsilon(1e-6));
  CHECK(res.equality_dual.size() == 1);
}

TEST_CASE("maximal Bell score over the relaxation hits the quantum bound") {
  const MomentStructure S = build_structure(ab_level1(), 2, HierarchyMode::Block);
  SdpProblem prob;
  prob.structure = &S;
  prob.fixed = {{S.blocks[0].cg[kCgOne], 1.0}};
  prob.objective = chsh_terms(S, -1.0);  // maximize the score
  const SdpResult res = solve_sdp(prob);
  REQUIRE(res.ok());
  const double tsirelson = 2.0 * std::sqrt(2.0);
  CHECK(-res.primal == doctest::Approx(tsirelson).epsilon(1e-7));
  CHECK(res.gap < 1e-6);

  // Affine certificate: the bound is -sum_k v_k w_k over the fixed moments.
  const double w_one = res.dual_weight[S.blocks[0].cg[kCgOne]];
  CHECK(-w_one == doctest::Approx(res.dual).epsilon(1e-6));

  // The returned moments respect the relaxation's own constraints.
  CHECK(std::abs(res.moments[S.blocks[0].cg[kCgA1B1]]) < 1.0 + 1e-7);
}

TEST_CASE("score fixed by an equality row is reached exactly") {
  const MomentStructure S = build_structure(ab_level1(), 2, HierarchyMode::Block);
  SdpProblem prob;
  prob.structure = &S;
  prob.fixed = {{S.blocks[0].cg[kCgOne], 1.0}};
  prob.equalities = {{chsh_terms(S, 1.0), 2.5}};
  // Feasibility problem with a mild objective to keep it bounded.
  prob.objective = {
      {S.blocks[0].index.at(fold(multiply(word_z(0, true), word_z(0)))), 1.0}};
  const SdpResult res = solve_sdp(prob);
  REQUIRE(res.ok());
  double score = res.moments[S.blocks[0].cg[kCgA1B1]] +
                 res.moments[S.blocks[0].cg[kCgA1B2]] +
                 res.moments[S.blocks[0].cg[kCgA2B1]] -
                 res.moments[S.blocks[0].cg[kCgA2B2]];
  CHECK(score == doctest::Approx(2.5).epsilon(1e-7));
}

TEST_CASE("statuses: infeasible fixes and unbounded objectives are detected") {
  const MomentStructure S = build_structure(ab_level1(), 1, HierarchyMode::Block);
  SUBCASE("fixing a correlation beyond its range is infeasible") {
    SdpProblem prob;
    prob.structure = &S;
    prob.fixed = {{S.blocks[0].cg[kCgOne], 1.0},
                  {S.blocks[0].cg[kCgA1], 1.5}};
    const SdpResult res = solve_sdp(prob);
    CHECK(res.status == SdpStatus::PrimalInfeasible);
  }
  SUBCASE("a score beyond the quantum bound is infeasible") {
    SdpProblem prob;
    prob.structure = &S;
    prob.fixed = {{S.blocks[0].cg[kCgOne], 1.0}};
    prob.equalities = {{chsh_terms(S, 1.0), 3.5}};
    const SdpResult res = solve_sdp(prob);
    CHECK(res.status == SdpStatus::PrimalInfeasible);
  }
  SUBCASE("an uncontrolled diagonal moment is unbounded below") {
    SdpProblem prob;
    prob.structure = &S;
    prob.fixed = {{S.blocks[0].cg[kCgOne], 1.0}};
    prob.objective = {
        {S.blocks[0].index.at(fold(multiply(word_z(0), word_z(0, true)))),
         -1.0}};
    const SdpResult res = solve_sdp(prob);
    CHECK(res.status == SdpStatus::Unbounded);
  }
}

TEST_CASE("reference and fast Schur kernels give bitwise-identical solves") {
  const MomentStructure S = build_structure(ab_level1(), 2, HierarchyMode::Block);
  SdpProblem prob;
  prob.structure = &S;
  prob.fixed = {{S.blocks[0].cg[kCgOne], 1.0}};
  prob.objective = chsh_terms(S, -1.0);
  SdpOptions serial;
  serial.serial_schur = true;
  SdpOptions fast;
  fast.serial_schur = false;
  const SdpResult a = solve_sdp(prob, serial);
  const SdpResult b = solve_sdp(prob, fast);
  REQUIRE(a.ok());
  REQUIRE(b.ok());
  CHECK(a.primal == b.primal);
  CHECK(a.dual == b.dual);
  CHECK(a.iterations == b.iterations);
  for (std::size_t k = 0; k < a.moments.size(); ++k)
    CHECK(a.moments[k] == b.moments[k]);
}

TEST_CASE("problem validation rejects malformed input") {
  const MomentStructure S = build_structure(ab_level1(), 1, HierarchyMode::Block);
  SdpProblem prob;
  prob.structure = &S;
  prob.fixed = {{S.blocks[0].cg[kCgOne], 1.0}};

  SUBCASE("missing structure") {
    SdpProblem bad;
    CHECK_THROWS_AS(solve_sdp(bad), std::invalid_argument);
  }
  SUBCASE("duplicate fix") {
    prob.fixed.push_back({S.blocks[0].cg[kCgOne], 0.5});
    CHECK_THROWS_AS(solve_sdp(prob), std::invalid_argument);
  }
  SUBCASE("objective on a fixed moment") {
    prob.objective = {{S.blocks[0].cg[kCgOne], 1.0}};
    CHECK_THROWS_AS(solve_sdp(prob), std::invalid_argument);
  }
  SUBCASE("id out of range") {
    prob.objective = {{S.num_moments + 5, 1.0}};
    CHECK_THROWS_AS(solve_sdp(prob), std::invalid_argument);
  }
}

TEST_CASE("solve counter increments and problems can be dumped") {
  const MomentStructure S =
      build_structure({word_identity()}, 1, HierarchyMode::Block);
  SdpProblem prob;
  prob.structure = &S;
  prob.fixed = {{S.blocks[0].cg[kCgOne], 1.0}};
  prob.objective = {{id_of(S, multiply(word_z(0, true), word_z(0))), 1.0}};

  const long before = sdp_solve_count();
  (void)solve_sdp(prob);
  CHECK(sdp_solve_count() == before + 1);

  std::ostringstream out;
  dump_sdp(prob, out);
  const std::string text = out.str();
  CHECK(text.find("sdp-moment-problem 1") != std::string::npos);
  CHECK(text.find("blocks 1") != std::string::npos);
  CHECK(text.find("fixed 1") != std::string::npos);
  CHECK(text.find("objective 1") != std::string::npos);
}
