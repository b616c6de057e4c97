#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "trusskit/module.hpp"
#include "trusskit/tensor.hpp"

namespace trusskit {

// ---------------------------------------------------------------------------
// Dual bases

// (e_1,…,e_s), (φ_1,…,φ_s) with s odd and p = [φ_1(p)·e_1, …, φ_s(p)·e_s].
// T-valued covectors index the carrier of T; with `unital` set they are maps
// P → T⁺ stored in `plus_covectors` and act through the unitalized action.
struct DualBasis {
  std::vector<Index> elements;
  std::vector<std::vector<Index>> covectors;
  bool unital = false;
  std::vector<std::vector<CoproductElement>> plus_covectors;
  std::size_t size() const { return elements.size(); }
};

struct DbpResult {
  bool holds = false;
  std::optional<Index> counterexample;  // first p in carrier order
};
DbpResult check_dual_basis(const ModulePtr& p, const DualBasis& basis, const UnitalPtr& ext = nullptr);

// s = 1, 3, …, s_max; element tuples lexicographic in carrier order outer,
// covector tuples in hom-enumeration order inner.  At most `limit` hits.
std::vector<DualBasis> dual_bases(const ModulePtr& p, std::size_t s_max = 3, std::size_t limit = 1);
std::optional<DualBasis> search_dual_basis(const ModulePtr& p, std::size_t s_max = 3);

// ⁎P = Hom_T(P, T⁺) as a right T-module, (f·t)(p) = f(p)t.  Maps are
// enumerated with values in the tail ball of radius `bound` (|P| when
// negative).  A finite image lies in one tail level and a T-multiple lies in
// T, so for non-empty P and T every map takes values in T and the bound is
// never binding.
struct DualModule {
  UnitalPtr ext;
  std::vector<std::vector<CoproductElement>> maps;
  ModulePtr module;
  std::optional<Index> index_of(const std::vector<CoproductElement>& f) const;
};
DualModule dual_module(const ModulePtr& p, std::int64_t bound = -1);
// The T⁺-valued variant of the search, covectors drawn from ⁎P.
std::optional<DualBasis> search_unital_dual_basis(const ModulePtr& p, const DualModule& dual, std::size_t s_max = 3);
// α = [φ_k · α(e_k)] for every α ∈ ⁎P.
bool dual_inherits_basis(const ModulePtr& p, const DualModule& dual, const DualBasis& basis);

// ---------------------------------------------------------------------------
// Tiny modules

struct TinyReport {
  ValidationReport report;
  std::size_t modules = 0;      // test modules M with τ_M, σ_M checked
  std::size_t naturality = 0;   // squares checked
  Index db_class = 0;           // [φ_k ⊗ e_k] in ⁎P ⊗_T P
};
// τ_M(α⊗m)(p) = α(p)·m against σ_M(f) = [φ_k ⊗ f(e_k)] for every test
// module, naturality along the first non-constant morphism between each
// ordered pair, and the two ev/db zigzags of the dual pair.
TinyReport tiny_check(const ModulePtr& p, const DualBasis& basis, const std::vector<ModulePtr>& test_modules);
// Class of [φ_k ⊗ e_k] in ⁎P ⊗_T P.
Index dual_basis_class(const ModulePtr& p, const DualModule& dual, const TensorProduct& dp, const DualBasis& basis);

// ---------------------------------------------------------------------------
// Morita contexts

// S-T bimodule P and T-S bimodule Q with ev: P ⊗_T Q → S on generator pairs
// and db(1_T) ∈ Q ⊗_S P as a sum-one row over pairs (q, p) at q·|P| + p.
// The optional inverses are checked when present.
struct MoritaContext {
  TrussPtr s, t;
  ModulePtr p_left, p_right, q_left, q_right;
  std::function<Index(Index p, Index q)> ev;
  SparseRow db_unit;
  std::function<SparseRow(Index s)> ev_inverse;       // into pairs (p, q) at p·|Q| + q
  std::function<Index(Index q, Index p)> db_inverse;  // into T
  std::string name;
};

struct MoritaReport {
  ValidationReport report;
  std::size_t pq_size = 0, qp_size = 0;
  std::vector<Integer> pq_invariants, qp_invariants;
  std::size_t relators_pq = 0, relators_qp = 0;
};
MoritaReport morita_check(const MoritaContext& ctx);

// S = n×n matrices over T, P = columns, Q = rows, ev(c ⊗ r) = c rᵗ,
// db(1) = (1,a,…,a) ⊗ (1,a,…,a)ᵗ for a two-sided absorber a.
MoritaContext matrix_morita_example(const TrussPtr& t, std::size_t n = 3, std::optional<Index> absorber = std::nullopt);
// S = T, P = Q = T, ev = multiplication, db(1) = 1 ⊗ 1.
MoritaContext unit_morita_context(const TrussPtr& t);

// ---------------------------------------------------------------------------
// Rings and their trusses

// A Z_n-module presented as a T(Z_n)-module whose heap base is the zero:
// additive action, 0·m = 0, 1·m = m, (r+s)·m = r·m + s·m.
ValidationReport validate_ring_module(const FiniteModule& m);
// T(−) keeps carrier and action.
ModulePtr truss_of_ring(const ModulePtr& ring_module);

// M_Abs = M/Abs(M) based at the class of Abs(M); η_M is the projection.
struct AbsModule {
  ModulePtr module;
  std::vector<Index> unit;  // η_M
  std::vector<std::vector<Index>> classes;
};
AbsModule abs_functor(const ModulePtr& m);
// f_Abs on classes.
std::vector<Index> abs_morphism(const AbsModule& m, const AbsModule& n, const std::vector<Index>& f);
// ε_N: T(N)_Abs → N.
std::vector<Index> abs_counit(const ModulePtr& ring_module, const AbsModule& abs_of_n);
// Both triangle identities for M and N, ε_N invertible.
ValidationReport abs_adjunction_check(const ModulePtr& truss_module, const ModulePtr& ring_module);
// η and ε squares along every linear map between the given modules.
ValidationReport abs_naturality_check(const std::vector<ModulePtr>& truss_modules,
                                      const std::vector<ModulePtr>& ring_modules);
// Classical test: the surjection R^g → M on a generating set splits.
bool ring_projective(const ModulePtr& ring_module);
// Ring modules among the fixture family of T(Z_n).
std::vector<ModulePtr> ring_module_family(std::size_t n, std::size_t max_size = 4);

// ---------------------------------------------------------------------------
// Exact and split sequences

struct ExactSequence {
  ModuleMorphism f, g;
  Index e = 0;  // im(f) = g⁻¹(e)
};
// Searches every e ∈ im(g) in carrier order.
std::optional<ExactSequence> exactness(const ModuleMorphism& f, const ModuleMorphism& g);

struct SplitIso {
  ModulePtr product;           // M × P, or M^(e′) × P
  std::vector<Index> forward;  // N → product (Φ), or product → N (Θ)
  std::vector<Index> inverse;
  std::vector<Index> splitting;  // retraction γ or section σ
  Index e = 0, e_prime = 0;
  ValidationReport report;
};
// Φ(n) = (γ(n), g(n)) for a retraction γ of f; Φ⁻¹(m, p) = [n_p, fγ(n_p), f(m)].
SplitIso split_product(const ModuleMorphism& f, const ModuleMorphism& g,
                       std::optional<std::vector<Index>> retraction = std::nullopt);
// Θ(m, p) = [f(m), σ(e), σ(p)] on M^(e′) × P with f(e′) = σ(e).
SplitIso star_sum(const ModuleMorphism& f, const ModuleMorphism& g,
                  std::optional<std::vector<Index>> section = std::nullopt);

// T^k → T^n, (t_1,…,t_k) ↦ (t_1,…,t_k,t_k,…,t_k), then the quotient by the
// image; split by the projection onto the first k factors.
struct PowerSplit {
  ModuleMorphism phi, psi;
  SplitIso iso;
  std::vector<Index> absorbers;  // of the quotient
};
PowerSplit power_split(const TrussPtr& t, std::size_t k, std::size_t n);

// First exact M → N → P over the fixture family with f injective, g split
// by a section and |M|, |P| ≥ 2; one whose f has no retraction is preferred.
struct StarSumInstance {
  ModuleMorphism f, g;
  SplitIso iso;
};
std::optional<StarSumInstance> find_star_sum_instance(const TrussPtr& t, std::size_t max_size = 4);

// ---------------------------------------------------------------------------
// Projectivity

// Surjective linear maps between non-empty family modules of size ≤ max_size.
std::vector<ModuleMorphism> epi_family(const TrussPtr& t, std::size_t max_size = 4);

struct ProjectivityReport {
  bool passed = true;
  std::size_t epis = 0, lifts = 0;
  std::optional<std::pair<std::size_t, std::vector<Index>>> blocking;  // (epi index, f)
  bool counit_tested = false, counit_lifted = false;
  std::string scope;
};
// Lifts every f: P → N along every π: M → N in the family, then id_P along
// the counit 𝒯^P → P with images drawn from the tail ball of radius
// `free_bound` (skipped beyond `free_budget` candidates).
ProjectivityReport projectivity(const ModulePtr& p, const std::vector<ModuleMorphism>& epis,
                                std::int64_t free_bound = 1, std::size_t free_budget = 1u << 20);

// 𝒯^{x} against every epi π: M → N: x ↦ n lifts along any m ∈ π⁻¹(n),
// compared on the tail ball of radius `bound`.
ProjectivityReport free_projectivity(const TrussPtr& t, const std::vector<ModuleMorphism>& epis,
                                     std::int64_t bound = 3);

// Section of the counit 𝒯^P → P drawn from the tail ball of radius
// `section_bound`, then Φ: 𝒯^P → P × Q for Q = 𝒯^P/∼_{φ(P)} checked on the
// ball of radius `bound`.  Evidence, not proof.
struct FreeFactorReport {
  ValidationReport report;
  std::vector<CoproductElement> section;
  std::size_t ball = 0, classes = 0;
  std::string scope;
};
FreeFactorReport free_factor(const ModulePtr& p, std::int64_t bound = 3, std::int64_t section_bound = 1);

// P × Q ≅ T^s for Q = T^s/∼_{φ(P)}, φ = (φ_1,…,φ_s), exhaustive.
SplitIso tiny_factor(const ModulePtr& p, const DualBasis& basis);

// Every candidate dual basis of T ⊞ T with s ≤ s_max, elements in the tail
// ball of radius `bound`, refuted by z = b·a·b⋯b whose tail |m|+1 differs
// from the tail m = [ℓ(e_1),…,ℓ(e_s)] of the right-hand side.
struct FreeNotTinyReport {
  std::size_t candidates = 0, refuted = 0;
  bool tail_invariant = false;
  ValidationReport report;
  bool all_refuted() const { return candidates == refuted; }
};
FreeNotTinyReport free_not_tiny_witness(const TrussPtr& t, std::size_t s_max = 3, std::int64_t bound = 3);

}  // namespace trusskit
