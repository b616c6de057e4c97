#include <set>

#include "doctest.h"
#include "trusskit/module.hpp"

using namespace trusskit;

namespace {

// Does h ∘ f = h ∘ g force f = g, for every target in the family?
bool cancels_on_right(const ModuleMorphism& f, const std::vector<ModulePtr>& family) {
  for (const auto& k : family) {
    const auto homs = hom_modules(*f.codomain, *k);
    for (const auto& a : homs) {
      for (const auto& b : homs) {
        if (a == b) continue;
        bool same = true;
        for (Index x = 0; x < f.map.size() && same; ++x) same = a[f(x)] == b[f(x)];
        if (same) return false;
      }
    }
  }
  return true;
}

bool cancels_on_left(const ModuleMorphism& f, const std::vector<ModulePtr>& family) {
  for (const auto& k : family) {
    const auto homs = hom_modules(*k, *f.domain);
    for (const auto& a : homs) {
      for (const auto& b : homs) {
        if (a == b) continue;
        bool same = true;
        for (Index x = 0; x < a.size() && same; ++x) same = f(a[x]) == f(b[x]);
        if (same) return false;
      }
    }
  }
  return true;
}

}  // namespace

TEST_CASE("module validation") {
  auto t2 = truss_from_ring(2);
  CHECK(validate_module(*regular_module(t2), true).ok());
  CHECK(validate_module(*regular_module(t2, Side::Right), true).ok());
  CHECK(validate_module(*trivial_module(t2, cyclic_heap(3))).ok());
  // T(Z_4) acting on H(Z_2) through reduction mod 2.
  auto t4 = truss_from_ring(4);
  std::vector<Index> act(8);
  for (Index t = 0; t < 4; ++t) {
    for (Index m = 0; m < 2; ++m) act[t * 2 + m] = (t % 2) * m;
  }
  FiniteModule red(t4, cyclic_heap(2), act);
  CHECK(validate_module(red, true).ok());
  act[7] = 0;  // 3·1 = 0 breaks distributivity over the truss bracket
  CHECK_FALSE(validate_module(FiniteModule(t4, cyclic_heap(2), act)).ok());

  auto odd = odd_residues_truss(8);
  CHECK(validate_module(*regular_module(odd), true).ok());
}

TEST_CASE("absorbers and induced modules") {
  auto t2 = truss_from_ring(2);
  auto reg = regular_module(t2);
  CHECK(absorbers(*reg) == std::vector<Index>{0});
  CHECK(*induced_module(reg, 0) == *reg);
  for (const auto& m : module_family(truss_from_ring(3), 4)) {
    for (Index e = 0; e < m->size(); ++e) {
      auto me = induced_module(m, e);
      CHECK(validate_module(*me).ok());
      const auto abs = absorbers(*me);
      CHECK(std::find(abs.begin(), abs.end(), e) != abs.end());
      for (Index f = 0; f < m->size(); ++f) {
        CHECK(*induced_module(me, f) == *induced_module(m, f));
        CHECK(find_module_isomorphism(*me, *induced_module(m, f)).has_value());
      }
    }
  }
}

TEST_CASE("hom heaps") {
  auto t2 = truss_from_ring(2);
  auto reg = regular_module(t2);
  CHECK(hom_modules(*reg, *trivial_module(t2, star_heap())).size() == 1);
  CHECK(hom_modules(*empty_module(t2), *reg).size() == 1);
  for (const auto& m : module_family(t2, 4)) {
    for (const auto& n : module_family(t2, 3)) {
      const auto homs = hom_modules(*m, *n);
      std::set<std::vector<Index>> set(homs.begin(), homs.end());
      const auto heap_homs = enumerate_heap_morphisms(m->heap_ptr(), n->heap_ptr());
      std::size_t filtered = 0;
      for (const auto& f : heap_homs) {
        bool lin = true;
        for (Index t = 0; t < 2; ++t) {
          for (Index x = 0; x < m->size(); ++x) lin = lin && f(m->act(t, x)) == n->act(t, f(x));
        }
        filtered += lin;
      }
      CHECK(filtered == homs.size());
      for (const auto& a : homs) {
        for (const auto& b : homs) {
          std::vector<Index> c(m->size());
          for (Index x = 0; x < m->size(); ++x) c[x] = n->heap().bracket(a[x], b[x], homs.front()[x]);
          CHECK(set.count(c) == 1);
        }
      }
    }
    if (m->size() > 0) CHECK(validate_truss(*linear_endomorphism_truss(*m).truss).ok());
  }
}

TEST_CASE("quotients by induced submodules") {
  auto t4 = truss_from_ring(4);
  auto reg = regular_module(t4);
  QuotientModule all = quotient_module(reg, make_subheap(reg->heap(), {0, 1, 2, 3}), 0);
  CHECK(all.module->size() == 1);
  QuotientModule q = quotient_module(reg, make_subheap(reg->heap(), {0, 2}), 0);
  CHECK(q.module->size() == 2);
  CHECK(validate_module(*q.module).ok());
  const auto abs = absorbers(*q.module);
  CHECK(std::find(abs.begin(), abs.end(), q.projection(0)) != abs.end());
  CHECK(is_linear(*reg, *q.module, q.projection.map));
  CHECK_THROWS_AS(quotient_module(reg, make_subheap(reg->heap(), {0, 2}), 1), DomainError);
  CHECK_THROWS_AS(quotient_module(reg, make_subheap(reg->heap(), {0, 1}), 0), DomainError);

  // Kernels of linear maps are induced-closed, and M/ker ≅ im.
  auto t2 = truss_from_ring(2);
  const auto fam = module_family(t2, 4);
  for (const auto& m : fam) {
    for (const auto& n : fam) {
      if (m->size() == 0) continue;
      for (const auto& f : hom_modules(*m, *n)) {
        const ModuleMorphism phi{m, n, f};
        const Index e = f[0];
        const SubHeap ker = kernel(HeapMorphism{m->heap_ptr(), n->heap_ptr(), f}, e);
        const Index base = ker.members.front();
        REQUIRE(is_induced_submodule(*m, ker, base));
        QuotientModule mq = quotient_module(m, ker, base);
        SubmoduleResult im = submodule(n, image_of(f));
        CHECK(find_module_isomorphism(*mq.module, *im.module).has_value());
        // Every linear map killing the kernel factors through the quotient.
        std::vector<Index> bar(mq.module->size());
        for (Index x = 0; x < m->size(); ++x) bar[mq.projection(x)] = f[x];
        CHECK(is_linear(*mq.module, *n, bar));
      }
    }
  }
}

TEST_CASE("coequalizers satisfy their universal property") {
  auto t2 = truss_from_ring(2);
  const auto fam = module_family(t2, 4);
  std::size_t pairs = 0;
  for (const auto& a : fam) {
    for (const auto& b : fam) {
      if (b->size() == 0 || a->size() > 2) continue;
      const auto homs = hom_modules(*a, *b);
      for (std::size_t i = 0; i < homs.size(); ++i) {
        for (std::size_t j = i; j < homs.size(); j += 3) {
          const ModuleMorphism phi{a, b, homs[i]}, psi{a, b, homs[j]};
          const QuotientModule c = coequalizer(phi, psi, 0);
          ++pairs;
          for (Index x = 0; x < a->size(); ++x) CHECK(c.projection(phi(x)) == c.projection(psi(x)));
          for (const auto& k : fam) {
            for (const auto& h : hom_modules(*b, *k)) {
              bool coeq = true;
              for (Index x = 0; x < a->size(); ++x) coeq = coeq && h[phi(x)] == h[psi(x)];
              std::size_t factor = 0;
              for (const auto& g : hom_modules(*c.module, *k)) {
                bool ok = true;
                for (Index y = 0; y < b->size(); ++y) ok = ok && g[c.projection(y)] == h[y];
                factor += ok;
              }
              CHECK(factor == (coeq ? 1u : 0u));
            }
          }
          // Other base points give isomorphic coequalizers.
          for (Index e = 1; e < b->size(); ++e) {
            CHECK(find_module_isomorphism(*coequalizer(phi, psi, e).module, *c.module).has_value());
          }
        }
      }
    }
  }
  CHECK(pairs > 20);
}

TEST_CASE("coequalizer of a kernel pair recovers the codomain") {
  auto t2 = truss_from_ring(2);
  auto reg = regular_module(t2);
  const auto fam = module_family(t2, 4);
  for (const auto& m : fam) {
    for (const auto& n : fam) {
      for (const auto& f : hom_modules(*m, *n)) {
        const ModuleMorphism pi{m, n, f};
        if (!is_epi(pi) || m->size() == 0) continue;
        ProductModule mm = product(m, m);
        std::vector<Index> pairs;
        for (Index x = 0; x < mm.module->size(); ++x) {
          if (f[mm.first(x)] == f[mm.second(x)]) pairs.push_back(x);
        }
        SubmoduleResult k = submodule(mm.module, pairs);
        std::vector<Index> p1, p2;
        for (Index x : k.inclusion.map) {
          p1.push_back(mm.first(x));
          p2.push_back(mm.second(x));
        }
        const QuotientModule c = coequalizer(ModuleMorphism{k.module, m, p1}, ModuleMorphism{k.module, m, p2});
        CHECK(find_module_isomorphism(*c.module, *n).has_value());
      }
    }
  }
}

TEST_CASE("equalizers, epis and monos") {
  auto t2 = truss_from_ring(2);
  const auto fam = module_family(t2, 4);
  std::vector<ModulePtr> small;
  for (const auto& m : fam) {
    if (m->size() <= 3) small.push_back(m);
  }
  for (const auto& m : fam) {
    for (const auto& n : fam) {
      const auto homs = hom_modules(*m, *n);
      for (const auto& f : homs) {
        const ModuleMorphism mf{m, n, f};
        CHECK(equalizer(mf, mf).module->size() == m->size());
        CHECK(is_epi(mf) == cancels_on_right(mf, small));
        CHECK(is_mono(mf) == cancels_on_left(mf, fam));
      }
      for (std::size_t i = 0; i < homs.size() && i < 4; ++i) {
        for (std::size_t j = 0; j < homs.size() && j < 4; ++j) {
          const ModuleMorphism phi{m, n, homs[i]}, psi{m, n, homs[j]};
          const SubmoduleResult eq = equalizer(phi, psi);
          for (const auto& k : fam) {
            for (const auto& h : hom_modules(*k, *m)) {
              bool equalizes = true;
              for (Index x = 0; x < k->size(); ++x) equalizes = equalizes && phi(h[x]) == psi(h[x]);
              std::size_t factor = 0;
              for (const auto& g : hom_modules(*k, *eq.module)) {
                bool ok = true;
                for (Index x = 0; x < k->size(); ++x) ok = ok && eq.inclusion(g[x]) == h[x];
                factor += ok;
              }
              CHECK(factor == (equalizes ? 1u : 0u));
            }
          }
        }
      }
    }
  }
}

TEST_CASE("a mono equalizes the projection and the constant map to the class of its image") {
  auto t2 = truss_from_ring(2);
  const auto fam = module_family(t2, 4);
  for (const auto& m : fam) {
    for (const auto& n : fam) {
      if (m->size() == 0) continue;
      for (const auto& f : hom_modules(*m, *n)) {
        if (!is_mono(ModuleMorphism{m, n, f})) continue;
        const SubHeap im = make_subheap(n->heap(), f);
        const QuotientModule q = quotient_module(n, im, f[0]);
        std::vector<Index> constant(n->size(), q.projection(f[0]));
        REQUIRE(is_linear(*n, *q.module, constant));
        const SubmoduleResult eq =
            equalizer(q.projection, ModuleMorphism{n, q.module, constant});
        CHECK(eq.inclusion.map == im.members);
      }
    }
  }
}

TEST_CASE("products") {
  auto t3 = truss_from_ring(3);
  for (const auto& m : module_family(t3, 4)) {
    ProductModule p = product(m, trivial_module(t3, star_heap()));
    CHECK(find_module_isomorphism(*p.module, *m).has_value());
    CHECK(validate_module(*product(m, regular_module(t3)).module).ok());
  }
  CHECK(power(regular_module(t3), 2)->size() == 9);
}

TEST_CASE("module coproducts act letter-wise") {
  for (std::size_t n : {2, 3}) {
    auto t = truss_from_ring(n);
    auto reg = regular_module(t);
    CoproductModule cop({reg, reg});
    const auto& c = cop.coproduct();
    CHECK(c.ball(1).size() < c.ball(2).size());
    for (Index s = 0; s < n; ++s) {
      for (Index m = 0; m < n; ++m) CHECK(cop.act(s, cop.inject(0, m)) == cop.inject(0, t->mul(s, m)));
    }
    // The base points 0 are absorbers, so tails are fixed.
    const auto ball = c.ball(3);
    for (const auto& x : ball) {
      for (Index s = 0; s < n; ++s) {
        const auto y = cop.act(s, x);
        CHECK(y.tails == x.tails);
        CHECK(y.parts[0] == t->mul(s, x.parts[0]));
        // Representative independence: act letter-wise on a padded word.
        AlternatingWord w = c.unfold(x);
        w.insert(w.begin() + 1, {Letter{1, 1}, Letter{1, 1}});
        for (auto& l : w) l.element = t->mul(s, l.element);
        CHECK(c.fold(w) == y);
      }
    }
    for (const auto& x : ball) {
      for (Index a = 0; a < n; ++a) {
        for (Index b = 0; b < n; ++b) {
          CHECK(cop.act(t->mul(a, b), x) == cop.act(a, cop.act(b, x)));
          for (Index d = 0; d < n; ++d) {
            CHECK(cop.act(t->heap().bracket(a, b, d), x) ==
                  c.bracket(cop.act(a, x), cop.act(b, x), cop.act(d, x)));
          }
        }
      }
      for (const auto& y : ball) {
        const auto& z = ball[(ball.size() * 7 + 3 * (&y - &ball[0])) % ball.size()];
        for (Index a = 0; a < n; ++a) {
          CHECK(cop.act(a, c.bracket(x, y, z)) == c.bracket(cop.act(a, x), cop.act(a, y), cop.act(a, z)));
        }
      }
    }
  }
  // A non-absorbing base point moves the tail for the trivial-on-⋆, shifting action.
  auto t2 = truss_from_ring(2);
  std::vector<Index> act{1, 0, 0, 1};  // 0·m = m+1, 1·m = m
  auto shifted = make_module(FiniteModule(t2, cyclic_heap(2), act));
  REQUIRE_FALSE(validate_module(*shifted).ok());
}

TEST_CASE("free modules") {
  auto t2 = truss_from_ring(2);
  auto ext = std::make_shared<const UnitalExtension>(t2);
  FreeModule one(t2, {"x"});
  const auto ball = one.ball(3);
  for (const auto& x : ball) {
    for (Index s = 0; s < 2; ++s) CHECK(one.act(s, x) == ext->multiply(ext->embed(s), x));
  }
  auto reg = regular_module(t2);
  FreeModule two(t2, {"x", "y"});
  const auto ball2 = two.ball(1);
  for (Index a = 0; a < 2; ++a) {
    for (Index b = 0; b < 2; ++b) {
      const std::vector<Index> images{a, b};
      CHECK(two.extend(*reg, images, two.generator(0)) == a);
      CHECK(two.extend(*reg, images, two.generator(1)) == b);
      for (const auto& x : ball2) {
        for (Index s = 0; s < 2; ++s) CHECK(two.extend(*reg, images, two.act(s, x)) == t2->mul(s, two.extend(*reg, images, x)));
        for (const auto& y : ball2) {
          const auto& z = ball2.back();
          CHECK(two.extend(*reg, images, two.coproduct().bracket(x, y, z)) ==
                t2->heap().bracket(two.extend(*reg, images, x), two.extend(*reg, images, y),
                                   two.extend(*reg, images, z)));
        }
      }
    }
  }
  // Counit onto the regular module: generators x_m ↦ m.
  std::set<Index> hit;
  for (const auto& x : two.ball(1)) hit.insert(two.extend(*reg, {0, 1}, x));
  CHECK(hit.size() == 2);
  CHECK_THROWS_AS(FreeModule(t2, {}), DomainError);
}

TEST_CASE("unitalization and restriction are mutually inverse") {
  for (std::size_t n : {2, 3}) {
    auto t = truss_from_ring(n);
    auto ext = std::make_shared<const UnitalExtension>(t);
    const auto fam = module_family(t, 4);
    const auto ball = ext->ball(2);
    for (const auto& m : fam) {
      const PlusModule p = unitalize(m, ext);
      CHECK(*restrict_to_base(p, t) == *m);
      for (Index x = 0; x < m->size(); ++x) CHECK(p.act(ext->unit(), x) == x);
      // The T⁺-action is an action: associativity on the ball.
      for (const auto& z : ext->ball(1)) {
        for (const auto& w : ext->ball(1)) {
          for (Index x = 0; x < m->size(); ++x) CHECK(p.act(ext->multiply(z, w), x) == p.act(z, p.act(w, x)));
        }
      }
      // Morphisms are the same on both sides.
      for (const auto& k : fam) {
        const PlusModule pk = unitalize(k, ext);
        for (const auto& f : hom_modules(*m, *k)) {
          for (const auto& z : ball) {
            for (Index x = 0; x < m->size(); ++x) CHECK(f[p.act(z, x)] == pk.act(z, f[x]));
          }
        }
      }
    }
    // Unital T⁺-modules built independently: restriction of unital
    // T-modules along the extension T⁺ → T of the identity.
    const auto id_ext = extend_to_unital(ext, t, [&] {
      std::vector<Index> id(n);
      for (Index a = 0; a < n; ++a) id[a] = a;
      return id;
    }());
    for (const auto& m : module_family(t, 4, true)) {
      PlusModule p{ext, m->heap_ptr(), [&, m](const CoproductElement& z, Index x) { return m->act(id_ext(z), x); }};
      const PlusModule back = unitalize(restrict_to_base(p, t), ext);
      for (const auto& z : ball) {
        for (Index x = 0; x < m->size(); ++x) CHECK(back.act(z, x) == p.act(z, x));
      }
    }
  }
}

TEST_CASE("module families") {
  auto t2 = truss_from_ring(2);
  const auto fam = module_family(t2, 4);
  for (const auto& m : fam) CHECK(validate_module(*m).ok());
  for (std::size_t i = 0; i < fam.size(); ++i) {
    for (std::size_t j = i + 1; j < fam.size(); ++j) {
      if (fam[i]->size() == fam[j]->size()) CHECK_FALSE(find_module_isomorphism(*fam[i], *fam[j]).has_value());
    }
  }
  for (const auto& m : module_family(t2, 4, true)) CHECK(validate_module(*m, true).ok());
}
