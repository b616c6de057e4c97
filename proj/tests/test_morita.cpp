#include <set>

#include "doctest.h"
#include "trusskit/morita.hpp"

using namespace trusskit;

namespace {

using Map = std::vector<Index>;

std::vector<ModulePtr> nonempty_family(const TrussPtr& t, std::size_t max_size) {
  std::vector<ModulePtr> out;
  for (const auto& m : module_family(t, max_size)) {
    if (m->size() > 0) out.push_back(m);
  }
  return out;
}

Map identity_map(std::size_t n) {
  Map id(n);
  for (std::size_t i = 0; i < n; ++i) id[i] = static_cast<Index>(i);
  return id;
}

}  // namespace

TEST_CASE("dual basis examples") {
  auto t2 = truss_from_ring(2);
  CHECK_FALSE(search_dual_basis(empty_module(t2)));

  for (auto t : {truss_from_ring(2), truss_from_ring(3), odd_residues_truss(8)}) {
    const auto reg = regular_module(t);
    DualBasis b;
    b.elements = {*t->unit()};
    b.covectors = {identity_map(t->size())};
    CHECK(check_dual_basis(reg, b).holds);
    CHECK(search_dual_basis(reg));
  }

  // ⋆ has a dual basis (∗, ∗ ↦ o) exactly when T has a left absorber o.
  const auto star2 = trivial_module(t2, star_heap());
  const auto found = search_dual_basis(star2);
  REQUIRE(found);
  CHECK(found->size() == 1);
  CHECK(found->covectors[0][0] == 0);
  CHECK_FALSE(search_dual_basis(trivial_module(odd_residues_truss(8), star_heap())));
}

TEST_CASE("dual basis search is deterministic") {
  auto t = truss_from_ring(2);
  const auto b = search_dual_basis(regular_module(t));
  REQUIRE(b);
  // Element 0 forces p = φ(p)·0 = 0, so the first hit is (1, id).
  CHECK(b->elements == std::vector<Index>{1});
  CHECK(b->covectors[0] == identity_map(2));
  const auto all = dual_bases(regular_module(t), 3, 50);
  CHECK(all.size() > 1);
  CHECK(all.front().elements == b->elements);
  for (const auto& d : all) CHECK(check_dual_basis(regular_module(t), d).holds);
}

TEST_CASE("a wrong covector gives a counterexample") {
  auto t = truss_from_ring(3);
  DualBasis b;
  b.elements = {1};
  b.covectors = {Map{0, 0, 0}};
  const auto r = check_dual_basis(regular_module(t), b);
  CHECK_FALSE(r.holds);
  REQUIRE(r.counterexample);
  CHECK(*r.counterexample == 1);
}

TEST_CASE("dual modules") {
  for (auto t : {truss_from_ring(2), truss_from_ring(3)}) {
    for (const auto& p : module_family(t, 4)) {
      const auto d = dual_module(p);
      const auto reg = regular_module(t);
      // Finite images sit at tail level zero: ⁎P is Hom_T(P, T).
      CHECK(d.maps.size() == (p->size() == 0 ? 1 : count_linear_maps(*p, *reg)));
      CHECK(validate_module(*d.module).ok());
      for (Index a = 0; a < t->size(); ++a) {
        for (Index f = 0; f < d.maps.size(); ++f) {
          const auto& g = d.maps[d.module->act(a, f)];
          for (Index x = 0; x < p->size(); ++x) CHECK(g[x] == d.ext->multiply(d.maps[f][x], d.ext->embed(a)));
        }
      }
    }
  }
  // ⁎⋆ over T(Z_2): the single map onto the left absorber 0; t·∗ = t rules
  // out the constant ∗.
  auto t2 = truss_from_ring(2);
  const auto ds = dual_module(trivial_module(t2, star_heap()));
  REQUIRE(ds.maps.size() == 1);
  CHECK(ds.maps[0][0] == ds.ext->embed(0));
  CHECK(ds.maps[0][0] != ds.ext->unit());

  const auto reg = regular_module(t2);
  const auto dr = dual_module(reg);
  CHECK(dr.maps.size() == 2);
  const auto b = search_dual_basis(reg);
  REQUIRE(b);
  CHECK(dual_inherits_basis(reg, dr, *b));
  const auto ub = search_unital_dual_basis(reg, dr);
  REQUIRE(ub);
  CHECK(check_dual_basis(reg, *ub, dr.ext).holds);
}

TEST_CASE("regular T(Z_2) is tiny") {
  auto t = truss_from_ring(2);
  const auto reg = regular_module(t);
  const auto b = search_dual_basis(reg);
  REQUIRE(b);
  const auto fam = nonempty_family(t, 4);
  const auto rep = tiny_check(reg, *b, fam);
  CHECK_MESSAGE(rep.report.ok(), (rep.report.ok() ? "" : rep.report.violations.front().law));
  CHECK(rep.modules == fam.size());
  CHECK(rep.naturality == fam.size() * fam.size());

  // [φ_k ⊗ e_k] does not depend on the dual basis.
  const auto dual = dual_module(reg);
  const auto dp = tensor(dual.module, reg);
  std::set<Index> classes;
  const auto all = dual_bases(reg, 3, 40);
  for (const auto& d : all) classes.insert(dual_basis_class(reg, dual, *dp, d));
  CHECK(all.size() > 1);
  CHECK(classes.size() == 1);
  CHECK(*classes.begin() == rep.db_class);
}

TEST_CASE("tiny checks over T(Z_3) and through ⋆") {
  auto t = truss_from_ring(3);
  const auto fam = nonempty_family(t, 3);
  for (const auto& p : fam) {
    const auto b = search_dual_basis(p);
    if (!b) continue;
    const auto rep = tiny_check(p, *b, fam);
    CHECK(rep.report.ok());
  }
  auto t2 = truss_from_ring(2);
  const auto star = trivial_module(t2, star_heap());
  const auto b = search_dual_basis(star);
  REQUIRE(b);
  CHECK(tiny_check(star, *b, {star, regular_module(t2)}).report.ok());
  DualBasis bad;
  bad.elements = {0};
  bad.covectors = {Map{0, 0}};
  CHECK_THROWS_AS(tiny_check(regular_module(t2), bad, {star}), DomainError);
}

TEST_CASE("unit Morita context") {
  for (auto t : {truss_from_ring(2), truss_from_ring(3), odd_residues_truss(8)}) {
    const auto rep = morita_check(unit_morita_context(t));
    CHECK_MESSAGE(rep.report.ok(), (rep.report.ok() ? "" : rep.report.violations.front().law));
  }
}

TEST_CASE("matrix Morita context over T(Z_2)") {
  auto t = truss_from_ring(2);
  const auto ctx = matrix_morita_example(t, 3);
  CHECK(ctx.s->size() == 512);
  CHECK(ctx.p_left->size() == 8);
  const auto rep = morita_check(ctx);
  CHECK_MESSAGE(rep.report.ok(), (rep.report.ok() ? "" : rep.report.violations.front().law));
  CHECK(rep.pq_size == 512);
  CHECK(rep.qp_size == 2);

  // Rows over T: e_k with 1 at k and a = 0 elsewhere, φ_2(x,y,z) = [a,y,a].
  DualBasis b;
  b.elements = {4, 2, 1};  // (1,0,0), (0,1,0), (0,0,1)
  Map f1(8), f2(8), f3(8);
  for (Index x = 0; x < 8; ++x) {
    f1[x] = (x >> 2) & 1;
    f2[x] = t->heap().bracket(0, (x >> 1) & 1, 0);
    f3[x] = x & 1;
  }
  b.covectors = {f1, f2, f3};
  CHECK(check_dual_basis(ctx.q_left, b).holds);
  for (const auto& f : b.covectors) CHECK(is_linear(*ctx.q_left, *regular_module(t), f));

  // A wrong db(1) breaks the zigzags.
  auto broken = ctx;
  broken.db_unit = {{0, 1}};
  broken.ev_inverse = nullptr;
  broken.db_inverse = nullptr;
  const auto bad = morita_check(broken);
  CHECK_FALSE(bad.report.ok());
}

TEST_CASE("matrix Morita context needs an absorber and a unit") {
  CHECK_THROWS_AS(matrix_morita_example(odd_residues_truss(8), 3), DomainError);
  CHECK_THROWS_AS(matrix_morita_example(truss_from_ring(2), 3, Index{1}), DomainError);
}

TEST_CASE("rings and the absorber functor") {
  const auto fam4 = ring_module_family(4);
  // Z_4 over itself is in the family.
  const auto t4 = truss_from_ring(4);
  const auto z4 = regular_module(t4);
  CHECK(validate_ring_module(*z4).ok());
  CHECK(truss_of_ring(z4) == z4);
  const AbsModule a4 = abs_functor(z4);
  const auto eps = abs_counit(z4, a4);
  CHECK(eps == identity_map(4));
  CHECK(is_linear(*a4.module, *z4, eps));

  // Abs(M) = M collapses to a point.
  const auto triv = trivial_module(t4, cyclic_heap(2));
  CHECK(abs_functor(triv).module->size() == 1);
  CHECK_THROWS_AS(abs_functor(regular_module(odd_residues_truss(8))).module, DomainError);

  std::vector<ModulePtr> with_abs;
  for (const auto& m : module_family(t4, 4, true)) {
    if (m->size() > 0 && !absorbers(*m).empty()) with_abs.push_back(m);
  }
  REQUIRE(fam4.size() >= 2);
  for (const auto& m : with_abs) {
    for (const auto& n : fam4) {
      const auto r = abs_adjunction_check(m, n);
      CHECK_MESSAGE(r.ok(), (r.ok() ? "" : r.violations.front().law));
    }
  }
  CHECK(abs_naturality_check(with_abs, fam4).ok());
}

TEST_CASE("projective ring modules give tiny truss modules") {
  auto t2 = truss_from_ring(2);
  const auto z2 = regular_module(t2);
  CHECK(ring_projective(z2));
  const auto b = search_dual_basis(truss_of_ring(z2));
  REQUIRE(b);
  CHECK(tiny_check(z2, *b, nonempty_family(t2, 4)).report.ok());

  // Z_2 over Z_4 is not projective and T(Z_2) has no dual basis over T(Z_4).
  for (const auto& n : ring_module_family(4)) {
    if (n->size() != 2) continue;
    CHECK_FALSE(ring_projective(n));
    CHECK_FALSE(search_dual_basis(n));
  }
  CHECK(ring_projective(regular_module(truss_from_ring(4))));
}

TEST_CASE("exactness and split sequences") {
  auto t = truss_from_ring(2);
  const auto ps = power_split(t, 1, 2);
  CHECK(ps.iso.report.ok());
  CHECK(ps.iso.product->size() == 4);
  CHECK_FALSE(ps.absorbers.empty());

  // M → M × P → P with canonical maps splits by the identity.
  const auto reg = regular_module(t);
  const auto prod = product(reg, reg);
  const ModuleMorphism incl{reg, prod.module, Map{0, 2}};
  const auto split = split_product(incl, prod.second, prod.first.map);
  CHECK(split.report.ok());
  CHECK(split.forward == identity_map(4));

  // No witness e when the image of f is not a fibre.
  const ModuleMorphism zero{reg, prod.module, Map{0, 0}};
  CHECK_FALSE(exactness(zero, prod.second));
  CHECK_THROWS_AS(split_product(zero, prod.second), DomainError);

  auto t3 = truss_from_ring(3);
  const auto inst = find_star_sum_instance(t3);
  REQUIRE(inst);
  CHECK(inst->iso.report.ok());
  CHECK(inst->f.domain->size() >= 2);
  CHECK(inst->g.codomain->size() >= 2);
  CHECK(inst->f.map[inst->iso.e_prime] == inst->iso.splitting[inst->iso.e]);
}

TEST_CASE("projectivity") {
  auto t2 = truss_from_ring(2);
  const auto epis = epi_family(t2, 4);
  CHECK(projectivity(empty_module(t2), epis).passed);
  const auto reg = projectivity(regular_module(t2), epis);
  CHECK(reg.passed);
  CHECK(reg.counit_tested);
  CHECK(reg.counit_lifted);
  CHECK(free_projectivity(t2, epis).passed);

  // ⋆ over an absorber-free truss: no linear ⋆ → T lifts id along T → ⋆.
  auto odd = odd_residues_truss(8);
  const auto oe = epi_family(odd, 4);
  const auto star = projectivity(trivial_module(odd, star_heap()), oe);
  CHECK_FALSE(star.passed);
  REQUIRE(star.blocking);
  CHECK(oe[star.blocking->first].domain->size() > 1);
}

TEST_CASE("modules with a dual basis pass every lift test") {
  for (auto t : {truss_from_ring(2), truss_from_ring(3)}) {
    const auto epis = epi_family(t, 4);
    for (const auto& p : nonempty_family(t, 4)) {
      if (!search_dual_basis(p)) continue;
      const auto r = projectivity(p, epis, 0);
      CHECK(r.blocking == std::nullopt);
    }
  }
}

TEST_CASE("direct factors of free modules") {
  auto t = truss_from_ring(2);
  const auto reg = regular_module(t);
  const auto ff = free_factor(reg);
  CHECK_MESSAGE(ff.report.ok(), (ff.report.ok() ? "" : ff.report.violations.front().law));
  CHECK(ff.classes > 1);
  CHECK(ff.scope == "bounded(3)");

  const auto b = search_dual_basis(reg);
  REQUIRE(b);
  CHECK(tiny_factor(reg, *b).report.ok());
  for (const auto& d : dual_bases(reg, 3, 20)) CHECK(tiny_factor(reg, d).report.ok());
}

TEST_CASE("T ⊞ T has no dual basis in the tail ball") {
  auto t = truss_from_ring(2);
  const auto r = free_not_tiny_witness(t, 3, 3);
  CHECK(r.tail_invariant);
  CHECK(r.report.ok());
  CHECK(r.candidates > 0);
  CHECK(r.all_refuted());
  // The single-generator case is not refuted.
  CHECK(search_dual_basis(regular_module(t)));
}
