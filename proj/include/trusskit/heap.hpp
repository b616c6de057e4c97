#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trusskit/core.hpp"

namespace trusskit {

// Finite abelian heap stored through its retract G(H;e) at the base e.
// [a,b,c] = a ⊖ b ⊕ c.  The empty heap is the default-constructed value.
class FiniteAbelianHeap {
 public:
  FiniteAbelianHeap() = default;
  // `add` is the n×n retract table (row-major).  Throws DomainError if
  // `base` is not a two-sided identity or some element lacks an inverse;
  // the remaining group axioms are the business of validate_heap.
  FiniteAbelianHeap(std::vector<std::string> labels, Index base, std::vector<Index> add);

  std::size_t size() const { return n_; }
  bool empty() const { return n_ == 0; }
  Index base() const { return base_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(Index i) const { return labels_[i]; }
  const std::vector<Index>& add_table() const { return add_; }

  Index add(Index a, Index b) const { return add_[static_cast<std::size_t>(a) * n_ + b]; }
  Index neg(Index a) const { return neg_[a]; }
  Index sub(Index a, Index b) const { return add(a, neg_[b]); }
  Index bracket(Index a, Index b, Index c) const { return add(sub(a, b), c); }
  // Left fold of an odd-length list.
  Index multi_bracket(std::span<const Index> xs) const;
  // k·x in the retract.
  Index scale(std::int64_t k, Index x) const;
  Index scale(const Integer& k, Index x) const;
  // Σ c_i x_i evaluated as base ⊕ Σ c_i (x_i ⊖ base); coefficients must sum
  // to one (affine combination), which makes the value base-independent.
  Index affine_sum(const SparseRow& terms) const;
  Index affine_sum(const std::vector<std::pair<Index, Integer>>& terms) const;

  // Same ternary operation, retract taken at `e`.
  FiniteAbelianHeap rebased(Index e) const;
  FiniteAbelianHeap relabeled(std::vector<std::string> labels) const;

  // Tables and bases agree (labels are presentation only).
  friend bool operator==(const FiniteAbelianHeap& a, const FiniteAbelianHeap& b) {
    return a.n_ == b.n_ && a.base_ == b.base_ && a.add_ == b.add_;
  }

 private:
  std::size_t n_ = 0;
  Index base_ = 0;
  std::vector<std::string> labels_;
  std::vector<Index> add_;
  std::vector<Index> neg_;
};

using HeapPtr = std::shared_ptr<const FiniteAbelianHeap>;

HeapPtr make_heap(FiniteAbelianHeap h);
HeapPtr empty_heap();
HeapPtr star_heap();
// H(Z_n).
HeapPtr cyclic_heap(std::size_t n);
// H(Z_{d_1} ⊕ … ⊕ Z_{d_k}); mixed radix with the first factor most significant.
HeapPtr abelian_group_heap(const std::vector<std::uint64_t>& orders);
// Carrier pairs (h,k) at index h*|K| + k; base = (base_H, base_K).
HeapPtr product_heap(const FiniteAbelianHeap& h, const FiniteAbelianHeap& k);

// Scan of a candidate ternary table on {0,…,n-1}: associativity, Mal'cev,
// commutativity.  Literal five-variable scan when n^5 is small; otherwise
// associativity is checked through the equivalent condition that the retract
// at 0 is an abelian group and the table is a ⊖ b ⊕ c.
ValidationReport validate_ternary(std::size_t n, const std::function<Index(Index, Index, Index)>& op);
ValidationReport validate_heap(const FiniteAbelianHeap& h);
// Builds the heap of a valid ternary table with the retract at `base`.
std::optional<FiniteAbelianHeap> heap_from_ternary(std::size_t n,
                                                   const std::function<Index(Index, Index, Index)>& op,
                                                   Index base = 0);

// Swap τ_e^f(a) = [a,e,f]; a group isomorphism G(H;e) → G(H;f).
std::vector<Index> swap_iso(const FiniteAbelianHeap& h, Index e, Index f);

struct SubHeap {
  std::size_t ambient_size = 0;
  std::vector<Index> members;  // sorted

  bool empty() const { return members.empty(); }
  std::size_t size() const { return members.size(); }
  bool contains(Index x) const;
  friend bool operator==(const SubHeap&, const SubHeap&) = default;
};

SubHeap make_subheap(const FiniteAbelianHeap& h, std::vector<Index> members);
bool is_closed(const FiniteAbelianHeap& h, const SubHeap& s);
// ⟨X⟩ = x0 ⊕ subgroup generated by {x ⊖ x0}.  Rejects an empty seed.
SubHeap generate_subheap(const FiniteAbelianHeap& h, const std::vector<Index>& seed);

struct HeapMorphism {
  HeapPtr domain;
  HeapPtr codomain;
  std::vector<Index> map;

  Index operator()(Index x) const { return map[x]; }
  friend bool operator==(const HeapMorphism& a, const HeapMorphism& b) { return a.map == b.map; }
};

bool is_heap_morphism(const FiniteAbelianHeap& h, const FiniteAbelianHeap& k,
                      const std::vector<Index>& map);

struct HeapQuotient {
  HeapPtr heap;
  HeapMorphism projection;
  std::vector<std::vector<Index>> classes;  // classes[i] sorted; ordered by least member
};

// Quotient by the congruence a ∼ b ⟺ [a,b,s] ∈ S.  Rejects empty or
// non-closed S.
HeapQuotient quotient_heap(const HeapPtr& h, const SubHeap& s);

// Preimage of e under φ; e must lie in the image.
SubHeap kernel(const HeapMorphism& phi, Index e);
// The unique φ̃ with φ̃ ∘ π = φ for the quotient by S; throws if the
// congruence of S does not refine the kernel relation of φ.
HeapMorphism factor_through(const HeapMorphism& phi, const SubHeap& s);

// G(H;base) ≅ ⊕ Z/d_i with explicit generators; d_i > 1, d_1 | d_2 | ….
struct CyclicDecomposition {
  std::vector<Index> generators;
  std::vector<std::uint64_t> orders;
  std::vector<std::uint64_t> coords;  // coords[x * rank + i]

  std::size_t rank() const { return orders.size(); }
};

CyclicDecomposition decompose(const FiniteAbelianHeap& h);

// All heap morphisms H → K, in order: group homomorphisms ψ (generator
// images lexicographic in carrier order) outer, image of the base inner.
std::vector<HeapMorphism> enumerate_heap_morphisms(const HeapPtr& h, const HeapPtr& k);
void for_each_heap_morphism(const FiniteAbelianHeap& h, const FiniteAbelianHeap& k,
                            const std::function<void(const std::vector<Index>&)>& visit);
// Same order; stops as soon as `visit` returns false.  Returns false iff stopped.
bool for_each_heap_morphism_while(const FiniteAbelianHeap& h, const FiniteAbelianHeap& k,
                                  const std::function<bool(const std::vector<Index>&)>& visit);
// |Hom_grp(G(H),G(K))| · |K| (1 if H is empty).
Integer count_heap_morphisms(const FiniteAbelianHeap& h, const FiniteAbelianHeap& k);

std::optional<std::vector<Index>> find_heap_isomorphism(const FiniteAbelianHeap& h,
                                                        const FiniteAbelianHeap& k);

// Distinct values of `map`, sorted.
std::vector<Index> image_of(const std::vector<Index>& map);

}  // namespace trusskit
