#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "trusskit/affine.hpp"
#include "trusskit/heap.hpp"

namespace trusskit {

// Abelian heap with an associative multiplication distributing over the
// bracket from both sides.  The carrier and heap structure are `heap()`.
class FiniteTruss {
 public:
  FiniteTruss() = default;
  FiniteTruss(HeapPtr heap, std::vector<Index> mult, std::optional<Index> unit = std::nullopt);

  const HeapPtr& heap_ptr() const { return heap_; }
  const FiniteAbelianHeap& heap() const { return *heap_; }
  std::size_t size() const { return heap_->size(); }
  Index mul(Index a, Index b) const { return mult_[static_cast<std::size_t>(a) * size() + b]; }
  const std::vector<Index>& mult_table() const { return mult_; }
  const std::optional<Index>& unit() const { return unit_; }
  bool is_unital() const { return unit_.has_value(); }

  friend bool operator==(const FiniteTruss& a, const FiniteTruss& b) {
    return *a.heap_ == *b.heap_ && a.mult_ == b.mult_ && a.unit_ == b.unit_;
  }

 private:
  HeapPtr heap_ = empty_heap();
  std::vector<Index> mult_;
  std::optional<Index> unit_;
};

using TrussPtr = std::shared_ptr<const FiniteTruss>;
TrussPtr make_truss(FiniteTruss t);

// Associativity and both distributive laws; the unit law when a unit is
// declared.  Distributivity is scanned literally on small carriers and
// otherwise as "t·x ⊖ t·e is additive in x" (and the mirror), which is
// equivalent.
ValidationReport validate_truss(const FiniteTruss& t);

// Two-sided unit by search, if any.
std::optional<Index> find_unit(const FiniteAbelianHeap& heap, const std::vector<Index>& mult);

// T(Z_n): heap a - b + c, ring multiplication, unit 1 (⋆ for n = 1).
TrussPtr truss_from_ring(std::size_t n);
// Odd residues modulo 2^k with the inherited bracket and multiplication.
TrussPtr odd_residues_truss(std::size_t modulus = 8);
// n×n matrices over a truss: entrywise bracket, row-by-column product
// r_ij = [t_i1 s_1j, …, t_in s_nj].  Needs n odd so the bracket has an odd
// number of terms.  A unit is recorded when one exists.
TrussPtr matrix_truss(const FiniteTruss& t, std::size_t n, std::size_t max_size = 4096);

TrussPtr opposite(const FiniteTruss& t);
// E(H): heap morphisms H → H with pointwise bracket, composition f·g = f∘g,
// unit = identity.  Carrier in enumeration order; `maps` holds the functions.
struct EndomorphismTruss {
  TrussPtr truss;
  std::vector<std::vector<Index>> maps;
  std::optional<Index> index_of(const std::vector<Index>& f) const;
};
EndomorphismTruss endomorphism_truss(const HeapPtr& h, std::size_t max_heap = 8);

// Absorbers: a with t·a = a (left), a·t = a (right) for all t.
std::vector<Index> left_absorbers(const FiniteTruss& t);
std::vector<Index> two_sided_absorbers(const FiniteTruss& t);

bool is_truss_morphism(const FiniteTruss& t, const FiniteTruss& s, const std::vector<Index>& map);
// Truss morphisms T → S, enumeration order of the underlying heap morphisms.
std::vector<std::vector<Index>> enumerate_truss_morphisms(const FiniteTruss& t, const FiniteTruss& s);

// T⁺ = T ⊞ ⋆ with ∗ as unit.  Letters from summand 0 are truss elements,
// the single letter of summand 1 is ∗.  Products unfold both factors,
// multiply the signed grid of letters by ∗∗ = ∗, ∗t = t = t∗, tt' = tt',
// and refold.
class UnitalExtension {
 public:
  explicit UnitalExtension(TrussPtr t);

  const TrussPtr& base() const { return base_; }
  const HeapCoproduct& coproduct() const { return cop_; }

  CoproductElement embed(Index t) const { return cop_.inject(0, t); }
  CoproductElement unit() const { return cop_.inject(1, 0); }
  CoproductElement bracket(const CoproductElement& a, const CoproductElement& b, const CoproductElement& c) const {
    return cop_.bracket(a, b, c);
  }
  CoproductElement multiply(const CoproductElement& x, const CoproductElement& y) const;
  Letter letter_product(const Letter& a, const Letter& b) const;
  std::vector<CoproductElement> ball(std::int64_t bound) const { return cop_.ball(bound); }
  std::string format(const CoproductElement& x) const { return cop_.format(x); }

 private:
  TrussPtr base_;
  HeapCoproduct cop_;
};

using UnitalPtr = std::shared_ptr<const UnitalExtension>;

// f̃: T⁺ → S for a truss morphism f: T → S into a unital S; ∗ ↦ 1_S and
// words are evaluated letter-wise.  Throws DomainError if f is not a truss
// morphism or S has no unit.
class UnitalExtensionMorphism {
 public:
  UnitalExtensionMorphism(UnitalPtr ext, TrussPtr target, std::vector<Index> f);
  Index operator()(const CoproductElement& x) const;
  const std::vector<Index>& restriction() const { return f_; }

 private:
  UnitalPtr ext_;
  TrussPtr target_;
  std::vector<Index> f_;
};

UnitalExtensionMorphism extend_to_unital(const UnitalPtr& ext, const TrussPtr& target, const std::vector<Index>& f);

}  // namespace trusskit
