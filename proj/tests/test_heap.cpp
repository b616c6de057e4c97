#include <algorithm>
#include <set>

#include "doctest.h"
#include "trusskit/heap.hpp"

using namespace trusskit;

namespace {

std::vector<HeapPtr> small_heaps() {
  return {empty_heap(), star_heap(), cyclic_heap(2), cyclic_heap(3), cyclic_heap(4),
          abelian_group_heap({2, 2})};
}

// Every function H → K, kept if it preserves all brackets.
std::size_t brute_force_morphisms(const FiniteAbelianHeap& h, const FiniteAbelianHeap& k) {
  const std::size_t n = h.size(), m = k.size();
  if (n == 0) return 1;
  if (m == 0) return 0;
  std::vector<Index> f(n, 0);
  std::size_t count = 0;
  for (;;) {
    bool ok = true;
    for (Index a = 0; a < n && ok; ++a) {
      for (Index b = 0; b < n && ok; ++b) {
        for (Index c = 0; c < n && ok; ++c) ok = f[h.bracket(a, b, c)] == k.bracket(f[a], f[b], f[c]);
      }
    }
    count += ok;
    std::size_t i = 0;
    while (i < n && ++f[i] == m) f[i++] = 0;
    if (i == n) return count;
  }
}

}  // namespace

TEST_CASE("ternary validation of small tables") {
  auto z4 = [](Index a, Index b, Index c) { return static_cast<Index>((a + 4 - b + c) % 4); };
  CHECK(validate_ternary(4, z4).ok());
  CHECK(validate_ternary(1, [](Index, Index, Index) { return Index{0}; }).ok());
  CHECK(validate_ternary(0, [](Index, Index, Index) { return Index{0}; }).ok());

  const ValidationReport bad = validate_ternary(2, [](Index a, Index, Index) { return a; });
  CHECK_FALSE(bad.ok());
  bool found = false;
  for (const auto& v : bad.violations) {
    if (v.law == "malcev [b,b,a]=a" && v.witness[0] != v.witness[1]) found = true;
  }
  CHECK(found);
  auto h = heap_from_ternary(4, z4);
  REQUIRE(h.has_value());
  CHECK(*h == *cyclic_heap(4));
}

TEST_CASE("reduced associativity check agrees with the literal scan") {
  // Z_33 sits above the literal-scan threshold.
  auto good = [](Index a, Index b, Index c) { return static_cast<Index>((a + 33 - b + c) % 33); };
  ValidationReport r = validate_ternary(33, good);
  CHECK(r.ok());
  CHECK(r.reduced_checks.size() == 1);
  // Swapping two outputs breaks it.
  auto broken = [&](Index a, Index b, Index c) {
    Index v = good(a, b, c);
    if (a == 5 && b == 7 && c == 9) v = (v + 1) % 33;
    if (a == 9 && b == 7 && c == 5) v = (v + 1) % 33;
    return v;
  };
  CHECK_FALSE(validate_ternary(33, broken).ok());
}

TEST_CASE("fixture heaps pass the axiom scan") {
  for (std::size_t n = 1; n <= 6; ++n) CHECK(validate_heap(*cyclic_heap(n)).ok());
  CHECK(validate_heap(*empty_heap()).ok());
  CHECK(validate_heap(*abelian_group_heap({2, 2})).ok());
  CHECK(validate_heap(*product_heap(*cyclic_heap(2), *cyclic_heap(3))).ok());
}

TEST_CASE("brackets and multi-brackets") {
  auto h_ptr = cyclic_heap(4);
  const auto& h = *h_ptr;
  CHECK(h.bracket(1, 3, 2) == 0);
  for (Index a = 0; a < 4; ++a) {
    for (Index b = 0; b < 4; ++b) CHECK(h.bracket(a, b, b) == a);
  }
  std::vector<Index> xs{1, 2, 3, 0, 1, 3, 2, 2, 1};
  // Right fold [x1,x2,[x3,x4,[…]]].
  Index right = xs.back();
  for (std::size_t i = xs.size() - 1; i >= 2; i -= 2) right = h.bracket(xs[i - 2], xs[i - 1], right);
  CHECK(h.multi_bracket(xs) == right);
  std::vector<Index> even{1, 2};
  CHECK_THROWS_AS(h.multi_bracket(even), DomainError);
}

TEST_CASE("transposition, grid rule and cancellation on small carriers") {
  for (const auto& hp : small_heaps()) {
    const auto& h = *hp;
    const auto n = static_cast<Index>(h.size());
    for (Index a = 0; a < n; ++a) {
      for (Index b = 0; b < n; ++b) {
        for (Index c = 0; c < n; ++c) {
          if (h.bracket(a, b, c) == c) CHECK(a == b);
          if (h.bracket(c, a, b) == c) CHECK(a == b);
          for (Index d = 0; d < n; ++d) {
            for (Index e = 0; e < n; ++e) {
              // [a,b,[c,d,e]] = [a,[d,c,b],e]
              CHECK(h.bracket(a, b, h.bracket(c, d, e)) == h.bracket(a, h.bracket(d, c, b), e));
            }
          }
        }
      }
    }
    // 3×3 grid: bracket of row brackets equals bracket of column brackets.
    if (n == 0) continue;
    for (Index s = 0; s < 40; ++s) {
      Index g[3][3];
      for (Index i = 0; i < 9; ++i) g[i / 3][i % 3] = (s * 7 + i * 5 + i * i) % n;
      Index rows[3], cols[3];
      for (int i = 0; i < 3; ++i) {
        rows[i] = h.bracket(g[i][0], g[i][1], g[i][2]);
        cols[i] = h.bracket(g[0][i], g[1][i], g[2][i]);
      }
      CHECK(h.bracket(rows[0], rows[1], rows[2]) == h.bracket(cols[0], cols[1], cols[2]));
    }
  }
}

TEST_CASE("retracts at every base reproduce the ternary table") {
  auto h_ptr = abelian_group_heap({2, 3});
  const auto& h = *h_ptr;
  for (Index e = 0; e < h.size(); ++e) {
    const FiniteAbelianHeap r = h.rebased(e);
    for (Index a = 0; a < h.size(); ++a) {
      for (Index b = 0; b < h.size(); ++b) {
        for (Index c = 0; c < h.size(); ++c) CHECK(r.bracket(a, b, c) == h.bracket(a, b, c));
      }
    }
  }
}

TEST_CASE("swap isomorphisms") {
  auto h_ptr = cyclic_heap(4);
  const auto& h = *h_ptr;
  std::vector<Index> id{0, 1, 2, 3};
  CHECK(swap_iso(h, 2, 2) == id);
  CHECK(swap_iso(h, 0, 1) == std::vector<Index>{1, 2, 3, 0});
  for (Index e = 0; e < 4; ++e) {
    for (Index f = 0; f < 4; ++f) {
      for (Index g = 0; g < 4; ++g) {
        auto ef = swap_iso(h, e, f), fg = swap_iso(h, f, g), eg = swap_iso(h, e, g);
        for (Index a = 0; a < 4; ++a) CHECK(fg[ef[a]] == eg[a]);
      }
    }
  }
}

TEST_CASE("generated sub-heaps") {
  auto h_ptr = cyclic_heap(4);
  const auto& h = *h_ptr;
  CHECK(generate_subheap(h, {3}).members == std::vector<Index>{3});
  CHECK(generate_subheap(h, {0, 2}).members == std::vector<Index>{0, 2});
  CHECK(generate_subheap(h, {0, 1}).members == std::vector<Index>{0, 1, 2, 3});
  CHECK(generate_subheap(h, {1, 3}).members == std::vector<Index>{1, 3});
  CHECK_THROWS_AS(generate_subheap(h, {}), DomainError);
  // Least closed superset: compare with a closure-by-brackets oracle.
  auto k_ptr = abelian_group_heap({2, 4});
  const auto& k = *k_ptr;
  for (Index a = 0; a < k.size(); ++a) {
    for (Index b = 0; b < k.size(); ++b) {
      std::set<Index> s{a, b};
      for (bool grew = true; grew;) {
        grew = false;
        std::vector<Index> cur(s.begin(), s.end());
        for (Index x : cur) {
          for (Index y : cur) {
            for (Index z : cur) grew |= s.insert(k.bracket(x, y, z)).second;
          }
        }
      }
      CHECK(generate_subheap(k, {a, b}).members == std::vector<Index>(s.begin(), s.end()));
    }
  }
}

TEST_CASE("quotients, kernels and factorization") {
  auto h = cyclic_heap(4);
  CHECK(quotient_heap(h, make_subheap(*h, {0, 1, 2, 3})).heap->size() == 1);
  CHECK(quotient_heap(h, make_subheap(*h, {2})).heap->size() == 4);
  HeapQuotient q = quotient_heap(h, make_subheap(*h, {0, 2}));
  CHECK(q.heap->size() == 2);
  CHECK(validate_heap(*q.heap).ok());
  CHECK(is_heap_morphism(*h, *q.heap, q.projection.map));
  CHECK(q.classes[q.projection(1)] == std::vector<Index>{1, 3});
  CHECK_THROWS_AS(quotient_heap(h, SubHeap{4, {}}), DomainError);
  CHECK_THROWS_AS(quotient_heap(h, make_subheap(*h, {0, 1})), DomainError);

  auto z2 = cyclic_heap(2);
  HeapMorphism red{h, z2, {0, 1, 0, 1}};
  CHECK(is_heap_morphism(*h, *z2, red.map));
  SubHeap ker = kernel(red, 0);
  CHECK(ker.members == std::vector<Index>{0, 2});
  HeapMorphism bar = factor_through(red, ker);
  CHECK(bar.map.size() == 2);
  CHECK(image_of(bar.map).size() == 2);  // im ≅ domain / kernel
  for (Index x = 0; x < 4; ++x) CHECK(bar.map[quotient_heap(h, ker).projection(x)] == red(x));
  CHECK_THROWS_AS(factor_through(red, make_subheap(*h, {0, 1, 2, 3})), DomainError);
  HeapMorphism id{h, h, {0, 1, 2, 3}};
  CHECK(kernel(id, 2).members == std::vector<Index>{2});
  HeapMorphism constant{h, h, {1, 1, 1, 1}};
  CHECK(kernel(constant, 1).size() == 4);
  CHECK(factor_through(constant, kernel(constant, 1)).map.size() == 1);
  CHECK_THROWS_AS(kernel(constant, 0), DomainError);
}

TEST_CASE("factorization through a quotient is unique among enumerated morphisms") {
  auto h = abelian_group_heap({2, 2});
  SubHeap s = generate_subheap(*h, {0, 1});
  HeapQuotient q = quotient_heap(h, s);
  for (const auto& k : small_heaps()) {
    for (const auto& phi : enumerate_heap_morphisms(h, k)) {
      bool kills = true;
      for (Index x : s.members) kills = kills && phi(x) == phi(s.members.front());
      if (!kills) continue;
      std::size_t factorizations = 0;
      for (const auto& psi : enumerate_heap_morphisms(q.heap, k)) {
        bool ok = true;
        for (Index x = 0; x < h->size(); ++x) ok = ok && psi(q.projection(x)) == phi(x);
        factorizations += ok;
      }
      CHECK(factorizations == 1);
    }
  }
}

TEST_CASE("morphism enumeration matches brute force on carriers up to 4") {
  for (const auto& h : small_heaps()) {
    for (const auto& k : small_heaps()) {
      const auto list = enumerate_heap_morphisms(h, k);
      CHECK(list.size() == brute_force_morphisms(*h, *k));
      CHECK(count_heap_morphisms(*h, *k) == static_cast<unsigned long>(list.size()));
      std::set<std::vector<Index>> distinct;
      for (const auto& f : list) {
        CHECK(is_heap_morphism(*h, *k, f.map));
        distinct.insert(f.map);
      }
      CHECK(distinct.size() == list.size());
      // Closed under the pointwise bracket.
      if (list.size() <= 16) {
        for (const auto& a : list) {
          for (const auto& b : list) {
            std::vector<Index> c(h->size());
            for (Index x = 0; x < h->size(); ++x) c[x] = k->bracket(a(x), b(x), list.front()(x));
            CHECK(distinct.count(c) == 1);
          }
        }
      }
    }
  }
  CHECK(enumerate_heap_morphisms(cyclic_heap(2), cyclic_heap(2)).size() == 4);
  CHECK(enumerate_heap_morphisms(cyclic_heap(2), cyclic_heap(3)).size() == 3);
  CHECK(enumerate_heap_morphisms(star_heap(), cyclic_heap(5)).size() == 5);
}

TEST_CASE("cyclic decomposition") {
  const auto h = abelian_group_heap({2, 4, 3});
  const CyclicDecomposition d = decompose(*h);
  Integer prod = 1;
  for (std::size_t i = 0; i < d.rank(); ++i) {
    prod *= static_cast<unsigned long>(d.orders[i]);
    if (i) CHECK(d.orders[i] % d.orders[i - 1] == 0);
  }
  CHECK(prod == 24);
  // Coordinates rebuild every element from the generators.
  for (Index x = 0; x < h->size(); ++x) {
    Index acc = h->base();
    for (std::size_t i = 0; i < d.rank(); ++i) {
      acc = h->add(acc, h->scale(static_cast<std::int64_t>(d.coords[x * d.rank() + i]), d.generators[i]));
    }
    CHECK(acc == x);
  }
  CHECK(find_heap_isomorphism(*h, *abelian_group_heap({2, 12})).has_value());
  CHECK_FALSE(find_heap_isomorphism(*abelian_group_heap({2, 2}), *cyclic_heap(4)).has_value());
}
