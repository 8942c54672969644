// Copyright (c) 2026 the diqkd authors.
// Distributed under the MIT License (see LICENSE).

#ifndef DIQKD_ALGEBRA_HPP
#define DIQKD_ALGEBRA_HPP

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace diqkd {

// Words in the operator algebra generated by Alice's and Bob's dichotomic
// observables A_x, B_y and Eve's unconstrained letters Z_k, Z_k^dag.
// Letters of different parties commute; within a party they do not.  The
// canonical form keeps the three subwords separately (A first, then B, then
// Z) with the dichotomic relations A_x^2 = B_y^2 = 1 applied; Z letters obey
// no relations beyond adjoints.
//
// Encoding: a and b hold observable indices (1 or 2); z holds
// 2 * letter_id + adjoint_bit.
struct Word {
  std::vector<std::uint8_t> a, b, z;

  bool operator==(const Word&) const = default;
  auto operator<=>(const Word&) const = default;

  bool is_identity() const { return a.empty() && b.empty() && z.empty(); }
  bool is_z_free() const { return z.empty(); }
  std::size_t length() const { return a.size() + b.size() + z.size(); }
};

Word word_identity();
Word word_a(int x);
Word word_b(int y);
Word word_z(int letter, bool adj = false);

// Product in canonical form.
Word multiply(const Word& u, const Word& v);

// Adjoint in canonical form (reverses each subword, flips Z daggers).
Word adjoint(const Word& w);

// Canonical representative of the pair {w, w+}: moments are real, so both
// carry the same value and share one id.
Word fold(const Word& w);

// Debug rendering, e.g. "A1.A2.B1.Z0'".
std::string to_string(const Word& w);

// Standard monomial sets for the A/B part of the hierarchy rows.
std::vector<Word> ab_level1();    // [1, A1, A2] x [1, B1, B2], 9 words
std::vector<Word> ab_level2();    // all products of length <= 2 per party, 25 words
std::vector<Word> ab_extended();  // level 1 plus the 5 degree <= 4 completions, 14 words

}  // namespace diqkd

#endif
