#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "trusskit/lattice.hpp"
#include "trusskit/module.hpp"

namespace trusskit {

// Module given by generators, sum-zero relations among them, and the action
// of each truss element on each generator as a sum-one row.  The heap is the
// free abelian heap on the generators modulo the relations.
struct Presentation {
  std::size_t generators = 0;
  std::vector<std::string> labels;
  std::vector<SparseRow> relations;
  Index base = 0;
  TrussPtr truss;
  Side side = Side::Left;
  std::function<SparseRow(Index t, Index y)> act;
};

// Generators = carrier, relations δ_{a+b} - δ_a - δ_b + δ_e.
Presentation present(const ModulePtr& m);
// T⁺ as a T-module on one side: generators T ∪ {∗} (∗ last), t·∗ = t.
Presentation present_unital_extension(const TrussPtr& t, Side side);

// M ⊗_T N for a right module M and a left module N, as the quotient of the
// sum-one vectors over generator pairs by the relator lattice
//   (relation of M) ⊗ y,  y ⊗ (relation of N),  (y·t) ⊗ y' - y ⊗ (t·y').
// Pair (a, b) sits at a * |Y_N| + b; vectors are stored without the base
// pair coordinate, which turns the sum-zero lattice into Z^{D-1}.
class TensorProduct {
 public:
  struct Options {
    std::optional<std::pair<Index, Index>> base_pair;  // default (base_M, base_N)
    std::size_t max_dim = 1u << 13;
    std::size_t max_carrier = 1u << 16;
  };

  TensorProduct(const Presentation& m, const Presentation& n);
  TensorProduct(const Presentation& m, const Presentation& n, Options options);

  std::size_t left_generators() const { return gm_; }
  std::size_t right_generators() const { return gn_; }
  bool empty() const { return gm_ == 0 || gn_ == 0; }
  std::pair<Index, Index> base_pair() const { return {base_ / static_cast<Index>(gn_), base_ % static_cast<Index>(gn_)}; }
  const IntegerLattice& lattice() const { return lattice_; }
  std::size_t relator_count() const { return relators_; }

  bool finite() const;
  // Invariant factors of the class group; 0 marks a free factor.
  std::vector<Integer> invariants() const { return lattice_.quotient_invariants(); }

  // Canonical coordinates of the class of a sum-one vector over pairs.
  IntVector class_of(const IntVector& v) const;
  IntVector class_of_pair(Index a, Index b) const;
  bool same_class(const IntVector& v, const IntVector& w) const;

  // Finite carriers only (InfiniteCarrierError otherwise).
  const HeapPtr& heap() const;
  std::size_t size() const { return heap()->size(); }
  Index index_of(const IntVector& coords) const;
  Index simple(Index a, Index b) const;
  // Sum-one vector over pairs representing a class.
  IntVector representative(Index cls) const;

  // f̂(Σ c_p δ_p) = Σ c_p f(p) in the target heap, over every class.  The
  // caller vouches that f is bilinear and balanced (see induce_balanced).
  std::vector<Index> induce(const std::function<Index(Index, Index)>& f, const FiniteAbelianHeap& target) const;
  // f̂ kills every Hermite row of the relator lattice, i.e. induce is well defined.
  bool vanishes_on_relators(const std::function<Index(Index, Index)>& f, const FiniteAbelianHeap& target) const;

  // Endomorphism of the class group induced by a linear map sending each
  // generator pair to a sum-one vector over pairs; throws DomainError when
  // the relator lattice is not preserved.
  std::vector<Index> induced_endomorphism(const std::function<SparseRow(Index pair)>& image) const;
  bool preserves_relators(const std::function<SparseRow(Index pair)>& image) const;

  // Action of a truss on the tensor through the action on the left factor
  // (side Left, `left_act` acts on generators of M) or on the right factor.
  ModulePtr as_module(const TrussPtr& r, Side side,
                      const std::function<SparseRow(Index r, Index y)>& act) const;

  IntVector pair_vector(Index a, Index b) const;
  Index pair_index(Index a, Index b) const { return a * static_cast<Index>(gn_) + b; }
  std::size_t pair_count() const { return gm_ * gn_; }

 private:
  IntVector reduce_coords(const IntVector& v) const;  // drop the base coordinate
  std::vector<Index> image_table(const std::function<SparseRow(Index pair)>& image) const;
  IntVector expand_coords(const IntVector& w) const;  // re-insert it
  void materialize();
  // Class coordinates of a sum-one vector through the per-pair table.
  std::vector<std::uint64_t> coords_from(const IntVector& v, const std::vector<SparseRow>* images) const;
  Index index_from(const std::vector<std::uint64_t>& c) const;
  std::vector<std::uint64_t> digits(Index cls) const;

  std::size_t gm_ = 0, gn_ = 0;
  Index base_ = 0;
  std::size_t relators_ = 0;
  IntegerLattice lattice_;
  std::vector<std::string> left_labels_, right_labels_;
  std::size_t max_carrier_ = 0;
  bool finite_ = false;
  HeapPtr heap_;
  std::vector<Integer> radix_;
  std::vector<Index> simple_;
  std::vector<std::uint64_t> moduli_;       // radix_ as machine words
  std::vector<std::uint64_t> pair_coords_;  // pair p, factor i at p * k + i; zero at the base pair
};

using TensorPtr = std::shared_ptr<const TensorProduct>;

// Tensor of finite modules: M right, N left, over the same truss.
TensorPtr tensor(const ModulePtr& m, const ModulePtr& n, TensorProduct::Options options = {});

// Bilinearity and T-balance of f: M × N → H, every instance.
ValidationReport check_balanced(const FiniteModule& m, const FiniteModule& n, const FiniteAbelianHeap& h,
                                const std::function<Index(Index, Index)>& f);
// f̂ with f̂(m ⊗ n) = f(m, n); throws DomainError with the first violation.
std::vector<Index> induce_balanced(const TensorProduct& t, const FiniteModule& m, const FiniteModule& n,
                                   const FiniteAbelianHeap& h, const std::function<Index(Index, Index)>& f);

// The tensor of an R-T bimodule (M as left R-module `m_left`) with a left
// T-module N, as a left R-module; and the mirror for a T-U bimodule N.
ModulePtr tensor_left_module(const TensorProduct& t, const ModulePtr& m_left);
ModulePtr tensor_right_module(const TensorProduct& t, const ModulePtr& n_right);

// α(m) = m ⊗ ∗ and β(m ⊗ z) = m·z for a right T-module M, plus the
// evaluation Hom_T(T⁺, N) → N on a left module through a bounded search.
struct UnitIsoReport {
  ValidationReport report;
  std::size_t tensor_size = 0;
  std::size_t hom_count = 0;
};
UnitIsoReport unit_isos(const ModulePtr& m_right, const ModulePtr& n_left, std::int64_t bound = 2);

// (A ⊗ B) ⊗ C → A ⊗ (B ⊗ C) for an R-S bimodule A (a_left, a_right), an
// S-T bimodule B (b_left, b_right), and a T-U bimodule C.
ValidationReport associator_check(const ModulePtr& a_left, const ModulePtr& a_right, const ModulePtr& b_left,
                                  const ModulePtr& b_right, const ModulePtr& c_left, const ModulePtr& c_right);

// Hom_S(M, Y) as a right T-module for a T-S bimodule M: (f·t)(m) = f(t·m).
struct HomModule {
  ModulePtr module;
  std::vector<std::vector<Index>> maps;
};
HomModule hom_module(const ModulePtr& m_left, const ModulePtr& m_right, const ModulePtr& y_right);

// Unit η_X and counit ε_Y of the tensor-hom adjunction for a T-S bimodule
// M, with both triangle identities, exhaustive.
ValidationReport adjunction_check(const ModulePtr& x_right, const ModulePtr& y_right, const ModulePtr& m_left,
                                  const ModulePtr& m_right);

// M ⊗ T ⊗ N ⇉ M ⊗ N (heap tensors over ⋆) via m·t ⊗ n and m ⊗ t·n; the
// coequalizer is compared with M ⊗_T N through m ⊗ n ↦ m ⊗ n.
ValidationReport tensor_as_coequalizer_check(const ModulePtr& m_right, const ModulePtr& n_left,
                                             std::size_t max_triple = 1u << 14);

// Every class is a bracket of simple tensors.
bool simple_tensors_generate(const TensorProduct& t);

}  // namespace trusskit
