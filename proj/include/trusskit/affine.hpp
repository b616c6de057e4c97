#pragma once

#include <compare>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "trusskit/core.hpp"
#include "trusskit/heap.hpp"

namespace trusskit {

// Element of the free abelian heap on a generator set: finitely supported
// integer coefficients summing to one.  Zero coefficients are never stored.
class AffineVector {
 public:
  static AffineVector generator(Index x);
  // Throws DomainError unless the coefficients sum to one.
  static AffineVector from_coefficients(std::map<Index, Integer> coeffs);

  const std::map<Index, Integer>& coefficients() const { return coeffs_; }
  Integer coefficient(Index x) const;

  friend AffineVector bracket(const AffineVector& a, const AffineVector& b, const AffineVector& c);
  friend bool operator==(const AffineVector&, const AffineVector&) = default;

  // `affine {x:3, y:-2}`, generators in index order.
  std::string to_string(const std::vector<std::string>& labels) const;

 private:
  std::map<Index, Integer> coeffs_;
};

// Alternating-sign fold of an odd-length word of generators.
AffineVector reduce_word(std::span<const Index> word);

// A letter of a word over the coproduct: an element of summand `summand`.
struct Letter {
  std::size_t summand = 0;
  Index element = 0;
  friend auto operator<=>(const Letter&, const Letter&) = default;
};

// Odd length; signs +,-,+,... by position.
using AlternatingWord = std::vector<Letter>;
// Letters with arbitrary integer weights summing to one (affine words).
using WeightedWord = std::vector<std::pair<Letter, std::int64_t>>;

// (g_1,…,g_k | z_1,…,z_{k-1}).  g_i is a carrier element of summand i read
// in the retract at that summand's base; z_j is the signed count of letters
// drawn from summands with index > j.
struct CoproductElement {
  std::vector<Index> parts;
  std::vector<std::int64_t> tails;
  friend auto operator<=>(const CoproductElement&, const CoproductElement&) = default;
};

// Coproduct M_1 ⊞ … ⊞ M_k of non-empty finite heaps in its flattened normal
// form, which realizes H(G(M_1;e_1) ⊕ … ⊕ G(M_k;e_k) ⊕ Z^{k-1}).
class HeapCoproduct {
 public:
  HeapCoproduct() = default;
  // Bases default to carrier index 0 of each summand.
  explicit HeapCoproduct(std::vector<HeapPtr> summands, std::vector<Index> bases = {});

  std::size_t arity() const { return summands_.size(); }
  const std::vector<HeapPtr>& summands() const { return summands_; }
  const FiniteAbelianHeap& summand(std::size_t i) const { return *summands_[i]; }
  const std::vector<Index>& bases() const { return bases_; }

  CoproductElement base_point() const;
  CoproductElement inject(std::size_t i, Index m) const;
  CoproductElement bracket(const CoproductElement& a, const CoproductElement& b,
                           const CoproductElement& c) const;
  CoproductElement affine_sum(const std::vector<std::pair<CoproductElement, std::int64_t>>& terms) const;

  CoproductElement fold(const AlternatingWord& w) const;
  CoproductElement fold(const WeightedWord& w) const;
  // Representative word: (e_1⊕g_1), then (e_i⊖g_i, e_i) for i ≥ 2, then tail
  // pairs.  c_i = z_{i-1} - z_i (z_k = 0) pairs (e_1, e_i) when positive and
  // (e_i, e_1) when negative, appended for i = 2..k.
  AlternatingWord unfold(const CoproductElement& x) const;

  // fold of the letter-wise image of unfold(x).
  CoproductElement map_letters(const CoproductElement& x, const std::function<Letter(const Letter&)>& f) const;

  bool is_valid(const CoproductElement& x) const;

  // All elements with |z_j| ≤ bound: tails lexicographic outer, parts in
  // carrier order inner.  Throws SizeLimitError beyond `limit` elements.
  std::vector<CoproductElement> ball(std::int64_t bound, std::size_t limit = 1u << 22) const;

  // `cop (g_1,...,g_k | z_1,...,z_{k-1})`
  std::string format(const CoproductElement& x) const;

 private:
  std::vector<HeapPtr> summands_;
  std::vector<Index> bases_;
};

// Binary coproduct of a truss heap with itself: the tail z.
std::int64_t tail_length(const CoproductElement& x);

// Re-bracketing (M_1 ⊞ … ⊞ M_{k-1}) ⊞ M_k of a flat element.
struct LeftNestedElement {
  CoproductElement inner;  // element of M_1 ⊞ … ⊞ M_{k-1}
  Index last = 0;          // retract element of M_k
  std::int64_t tail = 0;   // letters from M_k
  friend bool operator==(const LeftNestedElement&, const LeftNestedElement&) = default;
};

LeftNestedElement to_left_nested(const HeapCoproduct& flat, const CoproductElement& x);
CoproductElement from_left_nested(const HeapCoproduct& flat, const LeftNestedElement& x);

// Checks on the ball |z| ≤ bound: the injections are injective heap
// morphisms with disjoint images, bracket is componentwise a - b + c in
// G(M;e_M) × G(N;e_N) × Z, fold respects the defining congruence
// [ι(a),ι(b),ι(c)] = ι([a,b,c]), and fold ∘ unfold = id.
ValidationReport check_iso_direct(const HeapPtr& m, const HeapPtr& n, std::int64_t bound = 3);

}  // namespace trusskit
