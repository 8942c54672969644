// Copyright (c) 2026 the diqkd authors.
// Distributed under the MIT License (see LICENSE).

#include "diqkd/algebra.hpp"

#include <algorithm>
#include <stdexcept>

namespace diqkd {

namespace {

// Concatenate two dichotomic subwords, cancelling squares at the seam
// (A_x A_x = 1).  Both inputs are already reduced, so a stack pass over the
// concatenation reduces fully.
std::vector<std::uint8_t> join_dichotomic(const std::vector<std::uint8_t>& u,
                                          const std::vector<std::uint8_t>& v) {
  std::vector<std::uint8_t> out = u;
  for (std::uint8_t l : v) {
    if (!out.empty() && out.back() == l)
      out.pop_back();
    else
      out.push_back(l);
  }
  return out;
}

}  // namespace

Word word_identity() { return {}; }

Word word_a(int x) {
  if (x != 1 && x != 2) throw std::invalid_argument("word_a: index must be 1 or 2");
  Word w;
  w.a.push_back(static_cast<std::uint8_t>(x));
  return w;
}

Word word_b(int y) {
  if (y != 1 && y != 2) throw std::invalid_argument("word_b: index must be 1 or 2");
  Word w;
  w.b.push_back(static_cast<std::uint8_t>(y));
  return w;
}

Word word_z(int letter, bool adj) {
  if (letter < 0 || letter > 123)
    throw std::invalid_argument("word_z: letter id out of range");
  Word w;
  w.z.push_back(static_cast<std::uint8_t>(2 * letter + (adj ? 1 : 0)));
  return w;
}

Word multiply(const Word& u, const Word& v) {
  Word w;
  w.a = join_dichotomic(u.a, v.a);
  w.b = join_dichotomic(u.b, v.b);
  w.z = u.z;
  w.z.insert(w.z.end(), v.z.begin(), v.z.end());
  return w;
}

Word adjoint(const Word& w) {
  Word out;
  out.a.assign(w.a.rbegin(), w.a.rend());
  out.b.assign(w.b.rbegin(), w.b.rend());
  out.z.reserve(w.z.size());
  for (auto it = w.z.rbegin(); it != w.z.rend(); ++it)
    out.z.push_back(*it ^ 1u);
  return out;
}

Word fold(const Word& w) {
  Word adj = adjoint(w);
  return adj < w ? adj : w;
}

std::string to_string(const Word& w) {
  if (w.is_identity()) return "1";
  std::string s;
  auto app = [&](const std::string& t) {
    if (!s.empty()) s += '.';
    s += t;
  };
  for (auto l : w.a) app("A" + std::to_string(l));
  for (auto l : w.b) app("B" + std::to_string(l));
  for (auto l : w.z)
    app("Z" + std::to_string(l / 2) + ((l & 1) ? "'" : ""));
  return s;
}

std::vector<Word> ab_level1() {
  std::vector<Word> out;
  const std::vector<Word> as = {word_identity(), word_a(1), word_a(2)};
  const std::vector<Word> bs = {word_identity(), word_b(1), word_b(2)};
  for (const Word& u : as)
    for (const Word& v : bs) out.push_back(multiply(u, v));
  return out;
}

std::vector<Word> ab_level2() {
  std::vector<Word> out;
  const std::vector<Word> as = {word_identity(), word_a(1), word_a(2),
                                multiply(word_a(1), word_a(2)),
                                multiply(word_a(2), word_a(1))};
  const std::vector<Word> bs = {word_identity(), word_b(1), word_b(2),
                                multiply(word_b(1), word_b(2)),
                                multiply(word_b(2), word_b(1))};
  for (const Word& u : as)
    for (const Word& v : bs) out.push_back(multiply(u, v));
  return out;
}

std::vector<Word> ab_extended() {
  std::vector<Word> out = ab_level1();
  const Word a12 = multiply(word_a(1), word_a(2));
  const Word a21 = multiply(word_a(2), word_a(1));
  const Word b12 = multiply(word_b(1), word_b(2));
  const Word b21 = multiply(word_b(2), word_b(1));
  out.push_back(a12);
  out.push_back(a21);
  out.push_back(multiply(word_a(1), b21));
  out.push_back(multiply(a12, b12));
  out.push_back(multiply(a21, b12));
  return out;
}

}  // namespace diqkd
