#include <set>

#include "doctest.h"
#include "trusskit/tensor.hpp"
#include "oracles.hpp"

using namespace trusskit;

namespace {

ModulePtr as_right(const ModulePtr& m) { return make_module(m->with_side(Side::Right, m->truss_ptr())); }

std::vector<ModulePtr> small_family(const TrussPtr& t, std::size_t max_size) {
  std::vector<ModulePtr> out;
  for (const auto& m : module_family(t, max_size)) {
    if (!m->heap().empty()) out.push_back(m);
  }
  return out;
}

}  // namespace

TEST_CASE("tensor universal property against the bilinear-map count") {
  for (std::size_t n : {2u, 3u}) {
    auto t = truss_from_ring(n);
    const auto fam = small_family(t, 3);
    for (const auto& m : fam) {
      for (const auto& nl : fam) {
        const auto mr = as_right(m);
        const auto tp = tensor(mr, nl);
        for (const auto& k : {cyclic_heap(2), cyclic_heap(3)}) {
          CHECK(count_heap_morphisms(*tp->heap(), *k) == Integer(oracle::count_balanced_maps(*mr, *nl, *k)));
        }
      }
    }
  }
}

TEST_CASE("induced maps agree with balanced maps on simple tensors") {
  auto t = truss_from_ring(2);
  const auto fam = small_family(t, 4);
  std::size_t checked = 0;
  for (const auto& m : fam) {
    for (const auto& nl : fam) {
      if (m->size() * nl->size() > 8) continue;
      const auto mr = as_right(m);
      const auto tp = tensor(mr, nl);
      CHECK(simple_tensors_generate(*tp));
      const auto k = cyclic_heap(2);
      // Every heap morphism out of the tensor composed with ⊗ is balanced.
      for_each_heap_morphism(*tp->heap(), *k, [&](const std::vector<Index>& g) {
        const auto f = [&](Index a, Index b) { return g[tp->simple(a, b)]; };
        CHECK(check_balanced(*mr, *nl, *k, f).ok());
        CHECK(tp->vanishes_on_relators(f, *k));
        CHECK(induce_balanced(*tp, *mr, *nl, *k, f) == g);
        ++checked;
      });
    }
  }
  CHECK(checked > 50);
}

TEST_CASE("unbalanced maps are rejected") {
  auto t = truss_from_ring(2);
  auto reg = regular_module(t);
  auto tp = tensor(as_right(reg), reg);
  const auto k_ptr = cyclic_heap(2);
  const auto& k = *k_ptr;
  // f(a, b) = a is bilinear but f(a·0, b) = 0 ≠ a = f(a, 0·b) for a = 1.
  const auto f = [](Index a, Index) { return a; };
  CHECK(check_balanced(*as_right(reg), *reg, k, f).count > 0);
  CHECK_FALSE(tp->vanishes_on_relators(f, k));
  CHECK_THROWS_AS(induce_balanced(*tp, *as_right(reg), *reg, k, f), DomainError);
}

TEST_CASE("class group does not depend on the base pair") {
  auto t = truss_from_ring(3);
  for (const auto& m : small_family(t, 3)) {
    for (const auto& nl : small_family(t, 3)) {
      const auto mr = as_right(m);
      const auto ref = tensor(mr, nl);
      for (Index a = 0; a < mr->size(); ++a) {
        for (Index b = 0; b < nl->size(); ++b) {
          TensorProduct::Options opt;
          opt.base_pair = {{a, b}};
          const auto other = tensor(mr, nl, opt);
          CHECK(other->size() == ref->size());
          CHECK(other->invariants() == ref->invariants());
          // Same partition of generator pairs into classes.
          for (Index p = 0; p < ref->pair_count(); ++p) {
            for (Index q = 0; q < ref->pair_count(); ++q) {
              const Index gn = static_cast<Index>(nl->size());
              const bool same_ref = ref->simple(p / gn, p % gn) == ref->simple(q / gn, q % gn);
              const bool same_other = other->simple(p / gn, p % gn) == other->simple(q / gn, q % gn);
              CHECK(same_ref == same_other);
            }
          }
        }
      }
    }
  }
}

TEST_CASE("known tensors") {
  auto t2 = truss_from_ring(2);
  auto reg = regular_module(t2);
  // T(Z_2) ⊗ T(Z_2): t ⊗ s = 1·t ⊗ s = 1 ⊗ ts, and 0 ⊗ 0 ≠ 1 ⊗ 1 survives.
  auto tp = tensor(as_right(reg), reg);
  CHECK(tp->size() == 2);
  CHECK(tp->simple(0, 1) == tp->simple(1, 0));
  CHECK(tp->simple(0, 0) == tp->simple(0, 1));
  CHECK(tp->simple(1, 1) != tp->simple(0, 0));

  // Over ⋆ nothing is balanced away: H(Z_2) ⊗ H(Z_2) has 8 elements, the
  // affine hull of the four simple tensors.
  auto star = truss_from_ring(1);
  auto h2 = trivial_module(star, cyclic_heap(2));
  auto ht = tensor(as_right(h2), h2);
  CHECK(count_heap_morphisms(*ht->heap(), *cyclic_heap(2)) == Integer(oracle::count_balanced_maps(*as_right(h2), *h2, *cyclic_heap(2))));
  CHECK(ht->size() == 8);

  // Empty factors give the empty tensor.
  auto e = tensor(as_right(empty_module(t2)), reg);
  CHECK(e->heap()->empty());
}

TEST_CASE("tensors with the unital extension") {
  auto t = truss_from_ring(2);
  auto plus_left = present_unital_extension(t, Side::Left);
  auto plus_right = present_unital_extension(t, Side::Right);
  TensorProduct pp(plus_right, plus_left);
  CHECK_FALSE(pp.finite());
  CHECK_THROWS_AS(pp.heap(), InfiniteCarrierError);
  // A relator-free class group reports its free rank.
  bool free_factor = false;
  for (const auto& d : pp.invariants()) free_factor |= sgn(d) == 0;
  CHECK(free_factor);

  for (const auto& m : small_family(t, 4)) {
    TensorProduct mp(present(as_right(m)), plus_left);
    CHECK(mp.size() == m->size());
  }
}

TEST_CASE("unit isomorphisms") {
  for (auto t : {truss_from_ring(2), truss_from_ring(3), odd_residues_truss(8)}) {
    for (const auto& m : small_family(t, 4)) {
      const auto r = unit_isos(as_right(m), m, 2);
      CHECK_MESSAGE(r.report.ok(), (r.report.ok() ? "" : r.report.violations.front().law));
      CHECK(r.tensor_size == m->size());
      CHECK(r.hom_count == m->size());
    }
  }
}

TEST_CASE("associator") {
  auto t = truss_from_ring(2);
  const auto fam = small_family(t, 2);
  for (const auto& a : fam) {
    for (const auto& b : fam) {
      for (const auto& c : fam) {
        const auto rep = associator_check(a, as_right(a), b, as_right(b), c, as_right(c));
        CHECK(rep.ok());
      }
    }
  }
  // T(Z_3) with every middle factor up to size 3.
  auto t3 = truss_from_ring(3);
  for (const auto& b : small_family(t3, 3)) {
    auto reg = regular_module(t3);
    CHECK(associator_check(reg, as_right(reg), b, as_right(b), reg, as_right(reg)).ok());
  }
}

TEST_CASE("hom modules and the tensor-hom adjunction") {
  auto t = truss_from_ring(2);
  for (const auto& m : small_family(t, 2)) {
    const auto h = hom_module(m, as_right(m), as_right(m));
    CHECK(validate_module(*h.module).ok());
    CHECK(h.maps.size() == count_linear_maps(*m, *m));
  }
  // Trivial actions make X ⊗ M an affine heap tensor and Hom(M, X ⊗ M)
  // grows quickly, so the exhaustive sweep uses the regular bimodule and ⋆.
  const auto fam = module_family(t, 4);
  for (const auto& m : {regular_module(t), trivial_module(t, star_heap())}) {
    for (const auto& x : fam) {
      for (const auto& y : fam) {
        const auto rep = adjunction_check(as_right(x), as_right(y), m, as_right(m));
        CHECK_MESSAGE(rep.ok(), (rep.ok() ? "" : rep.violations.front().law));
      }
    }
  }
}

TEST_CASE("tensor over T is the coequalizer of the heap tensors") {
  for (auto t : {truss_from_ring(2), truss_from_ring(3)}) {
    const auto fam = small_family(t, 3);
    for (const auto& m : fam) {
      for (const auto& n : fam) {
        if (m->size() * n->size() > 6) continue;
        const auto rep = tensor_as_coequalizer_check(as_right(m), n);
        CHECK_MESSAGE(rep.ok(), (rep.ok() ? "" : rep.violations.front().law));
      }
    }
  }
}

TEST_CASE("tensor actions from bimodules") {
  auto t = truss_from_ring(3);
  for (const auto& m : small_family(t, 3)) {
    for (const auto& n : small_family(t, 3)) {
      const auto tp = tensor(as_right(m), n);
      const auto left = tensor_left_module(*tp, m);
      const auto right = tensor_right_module(*tp, as_right(n));
      CHECK(validate_module(*left).ok());
      CHECK(validate_module(*right).ok());
      for (Index s = 0; s < t->size(); ++s) {
        for (Index a = 0; a < m->size(); ++a) {
          for (Index b = 0; b < n->size(); ++b) {
            CHECK(left->act(s, tp->simple(a, b)) == tp->simple(m->act(s, a), b));
            CHECK(right->act(s, tp->simple(a, b)) == tp->simple(a, n->act(s, b)));
          }
        }
      }
    }
  }
}

TEST_CASE("relator-breaking endomorphisms are rejected") {
  auto t = truss_from_ring(2);
  auto reg = regular_module(t);
  auto tp = tensor(as_right(reg), reg);
  // Swap 0⊗0 with 1⊗1 only: breaks (0·1)⊗1 = 0⊗(1·1).
  const auto image = [](Index p) { return SparseRow{{p == 0 ? 3u : p == 3 ? 0u : p, 1}}; };
  CHECK_FALSE(tp->preserves_relators(image));
  CHECK_THROWS_AS(tp->induced_endomorphism(image), DomainError);
  const auto id = [](Index p) { return SparseRow{{p, 1}}; };
  const auto e = tp->induced_endomorphism(id);
  for (Index c = 0; c < tp->size(); ++c) CHECK(e[c] == c);
}
