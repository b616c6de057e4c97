#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "trusskit/affine.hpp"
#include "trusskit/heap.hpp"
#include "trusskit/truss.hpp"

namespace trusskit {

enum class Side { Left, Right };

// T-module on a finite heap.  `act(t, m)` is t·m for a left module and m·t
// for a right module; the table is indexed t * |M| + m either way.
class FiniteModule {
 public:
  FiniteModule() = default;
  FiniteModule(TrussPtr truss, HeapPtr heap, std::vector<Index> action, Side side = Side::Left);

  const TrussPtr& truss_ptr() const { return truss_; }
  const FiniteTruss& truss() const { return *truss_; }
  const HeapPtr& heap_ptr() const { return heap_; }
  const FiniteAbelianHeap& heap() const { return *heap_; }
  std::size_t size() const { return heap_->size(); }
  Side side() const { return side_; }
  Index act(Index t, Index m) const { return action_[static_cast<std::size_t>(t) * size() + m]; }
  const std::vector<Index>& action_table() const { return action_; }

  // Same heap and table read from the other side.  Valid when the truss is
  // commutative or the caller has replaced the truss by its opposite.
  FiniteModule with_side(Side side, TrussPtr truss) const;

  friend bool operator==(const FiniteModule& a, const FiniteModule& b) {
    return a.side_ == b.side_ && *a.heap_ == *b.heap_ && a.action_ == b.action_;
  }

 private:
  TrussPtr truss_;
  HeapPtr heap_ = empty_heap();
  std::vector<Index> action_;
  Side side_ = Side::Left;
};

using ModulePtr = std::shared_ptr<const FiniteModule>;
ModulePtr make_module(FiniteModule m);

// Action associativity and both distributive laws; `unital` adds 1·m = m.
// Large carriers use the equivalent additive-in-the-retract scans.
ValidationReport validate_module(const FiniteModule& m, bool unital = false);

ModulePtr regular_module(const TrussPtr& t, Side side = Side::Left);
// t·m = m, the action through T → ⋆.
ModulePtr trivial_module(const TrussPtr& t, const HeapPtr& h, Side side = Side::Left);
ModulePtr empty_module(const TrussPtr& t, Side side = Side::Left);

std::vector<Index> absorbers(const FiniteModule& m);
// t ·_e m = [t·m, t·e, e].
ModulePtr induced_module(const ModulePtr& m, Index e);

struct ModuleMorphism {
  ModulePtr domain;
  ModulePtr codomain;
  std::vector<Index> map;
  Index operator()(Index x) const { return map[x]; }
};

bool is_linear(const FiniteModule& m, const FiniteModule& n, const std::vector<Index>& map);
// Heap morphisms M → N that respect the action, in heap-enumeration order.
std::vector<std::vector<Index>> hom_modules(const FiniteModule& m, const FiniteModule& n);
void for_each_linear_map(const FiniteModule& m, const FiniteModule& n,
                         const std::function<bool(const std::vector<Index>&)>& visit);
std::size_t count_linear_maps(const FiniteModule& m, const FiniteModule& n);
// E_T(M): linear endomorphisms, pointwise bracket, composition.
EndomorphismTruss linear_endomorphism_truss(const FiniteModule& m);
std::optional<std::vector<Index>> find_module_isomorphism(const FiniteModule& m, const FiniteModule& n);

// Sub-heap closed under the action, as a module with the inclusion map.
struct SubmoduleResult {
  ModulePtr module;
  ModuleMorphism inclusion;
};
SubmoduleResult submodule(const ModulePtr& m, const std::vector<Index>& members);
bool is_submodule(const FiniteModule& m, const SubHeap& s);
// Closed under the e-induced action.
bool is_induced_submodule(const FiniteModule& m, const SubHeap& s, Index e);

struct QuotientModule {
  ModulePtr module;
  ModuleMorphism projection;
  std::vector<std::vector<Index>> classes;
  Index base = 0;  // the chosen e
};
// M/N for N closed under the e-induced action; `e` must lie in N.
QuotientModule quotient_module(const ModulePtr& m, const SubHeap& n, Index e);

// Coequalizer C(e) = B/⟨N(e), e⟩ with N(e) = {[φ(a), ψ(a), e]}; the closure
// alternates sub-heap closure and e-induced-action closure until stable.
QuotientModule coequalizer(const ModuleMorphism& phi, const ModuleMorphism& psi, Index e = 0);
SubmoduleResult equalizer(const ModuleMorphism& phi, const ModuleMorphism& psi);

bool is_epi(const ModuleMorphism& f);
bool is_mono(const ModuleMorphism& f);

struct ProductModule {
  ModulePtr module;  // carrier (m, n) at m * |N| + n
  ModuleMorphism first, second;
};
ProductModule product(const ModulePtr& m, const ModulePtr& n);
// Iterated product M^k, first factor most significant.
ModulePtr power(const ModulePtr& m, std::size_t k);

// Orbit ⟨X⟩ closure in M: smallest submodule containing X.
SubHeap generated_submodule(const FiniteModule& m, const std::vector<Index>& seed);

// ---------------------------------------------------------------------------
// Lazy modules

// Coproduct M_1 ⊞ … ⊞ M_k of non-empty finite modules with the letter-wise
// action.
class CoproductModule {
 public:
  explicit CoproductModule(std::vector<ModulePtr> summands);
  const HeapCoproduct& coproduct() const { return cop_; }
  const std::vector<ModulePtr>& summands() const { return summands_; }
  const TrussPtr& truss_ptr() const { return summands_.front()->truss_ptr(); }
  CoproductElement act(Index t, const CoproductElement& x) const;
  CoproductElement inject(std::size_t i, Index m) const { return cop_.inject(i, m); }

 private:
  std::vector<ModulePtr> summands_;
  HeapCoproduct cop_;
};

// Free left module 𝒯^X = ⊞_{x∈X} T⁺x flattened to the 2|X|-ary coproduct
// (T, ⋆, T, ⋆, …): summand 2i is T·x_i, summand 2i+1 is the point ∗x_i.
// t·t' = tt' in T·x_i and t·∗x_i = t in T·x_i.
class FreeModule {
 public:
  FreeModule(TrussPtr t, std::vector<std::string> generators);
  const HeapCoproduct& coproduct() const { return cop_; }
  const TrussPtr& truss_ptr() const { return truss_; }
  const std::vector<std::string>& generators() const { return generators_; }
  std::size_t rank() const { return generators_.size(); }

  CoproductElement generator(std::size_t i) const { return cop_.inject(2 * i + 1, 0); }
  CoproductElement act(Index t, const CoproductElement& x) const;
  std::vector<CoproductElement> ball(std::int64_t bound) const { return cop_.ball(bound); }

  // The unique linear extension of x_i ↦ images[i] into a finite module.
  Index extend(const FiniteModule& target, const std::vector<Index>& images, const CoproductElement& x) const;

 private:
  TrussPtr truss_;
  std::vector<std::string> generators_;
  HeapCoproduct cop_;
};

// A module over T⁺ given by its action function on a finite heap.
struct PlusModule {
  UnitalPtr ext;
  HeapPtr heap;
  std::function<Index(const CoproductElement&, Index)> act;
};

// ∗·m = m, words evaluated letter-wise.
PlusModule unitalize(const ModulePtr& m, const UnitalPtr& ext);
// Restriction along ι_T: T⁺ → T⁺ back to a T-module.
ModulePtr restrict_to_base(const PlusModule& p, const TrussPtr& t);
// Action composed with a truss morphism f: T → S.
ModulePtr restrict_scalars(const TrussPtr& t, const std::vector<Index>& f, const ModulePtr& n);

// ---------------------------------------------------------------------------
// Fixture families

// Canonical heaps of size ≤ max_size: ∅, ⋆, H(Z_2), H(Z_3), H(Z_4), H(Z_2²).
std::vector<HeapPtr> canonical_heaps(std::size_t max_size = 4);
// Every left module over T on a canonical heap of size ≤ max_size, one per
// isomorphism class, in (heap, action table) order.  Built from the truss
// morphisms T → E(H).
std::vector<ModulePtr> module_family(const TrussPtr& t, std::size_t max_size = 4, bool unital_only = false);

// Lexicographically least action table over the heap automorphisms; two
// modules on one canonical heap are isomorphic iff these agree.
std::vector<Index> canonical_action(const FiniteModule& m);

}  // namespace trusskit
