#include "doctest.h"
#include "trusskit/truss.hpp"

using namespace trusskit;

TEST_CASE("fixture trusses validate") {
  for (std::size_t n = 1; n <= 4; ++n) {
    auto t = truss_from_ring(n);
    CHECK(validate_truss(*t).ok());
    CHECK(t->is_unital());
  }
  CHECK(truss_from_ring(1)->size() == 1);
  auto odd = odd_residues_truss(8);
  CHECK(odd->size() == 4);
  CHECK(validate_truss(*odd).ok());
  CHECK(odd->heap().label(*odd->unit()) == "1");
  CHECK(left_absorbers(*odd).empty());
  CHECK(left_absorbers(*truss_from_ring(2)) == std::vector<Index>{0});

  auto e = endomorphism_truss(cyclic_heap(2));
  CHECK(e.truss->size() == 4);
  CHECK(validate_truss(*e.truss).ok());
  CHECK(endomorphism_truss(star_heap()).truss->size() == 1);
}

TEST_CASE("a broken table is reported") {
  auto z2 = truss_from_ring(2);
  std::vector<Index> mult = z2->mult_table();
  mult[3] = 0;  // 1·1 = 0
  const ValidationReport rep = validate_truss(FiniteTruss(z2->heap_ptr(), mult, Index{1}));
  CHECK_FALSE(rep.ok());
}

TEST_CASE("3x3 matrices over T(Z_2)") {
  auto t = truss_from_ring(2);
  auto s = matrix_truss(*t, 3);
  REQUIRE(s->size() == 512);
  REQUIRE(s->unit().has_value());
  CHECK(s->heap().label(*s->unit()) == "(1,0,0;0,1,0;0,0,1)");
  const ValidationReport rep = validate_truss(*s);
  CHECK(rep.ok());
  CHECK(rep.reduced_checks.size() >= 2);
  // Oracle: ordinary matrix product mod 2 on the same encoding.
  auto entry = [](Index m, int k) { return (m >> (8 - k)) & 1U; };
  for (Index a = 0; a < 512; a += 7) {
    for (Index b = 0; b < 512; b += 5) {
      Index c = 0;
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          unsigned v = 0;
          for (int k = 0; k < 3; ++k) v ^= entry(a, i * 3 + k) & entry(b, k * 3 + j);
          c = (c << 1) | v;
        }
      }
      CHECK(s->mul(a, b) == c);
    }
  }
  CHECK(*matrix_truss(*t, 1) == *t);
  CHECK_THROWS_AS(matrix_truss(*t, 2), DomainError);
  CHECK_THROWS_AS(matrix_truss(*truss_from_ring(3), 3), SizeLimitError);
}

TEST_CASE("opposite is an involution") {
  auto e = endomorphism_truss(cyclic_heap(3)).truss;
  CHECK(*opposite(*opposite(*e)) == *e);
  CHECK_FALSE(*opposite(*e) == *e);
  CHECK(validate_truss(*opposite(*e)).ok());
}

TEST_CASE("unital extension") {
  for (std::size_t n : {2, 3}) {
    auto t = truss_from_ring(n);
    UnitalExtension ext(t);
    for (Index a = 0; a < n; ++a) {
      for (Index b = 0; b < n; ++b) CHECK(ext.multiply(ext.embed(a), ext.embed(b)) == ext.embed(t->mul(a, b)));
    }
    const auto ball = ext.ball(2);
    for (const auto& x : ball) {
      CHECK(ext.multiply(ext.unit(), x) == x);
      CHECK(ext.multiply(x, ext.unit()) == x);
    }
    const auto small = ext.ball(1);
    for (const auto& x : small) {
      for (const auto& y : small) {
        for (const auto& z : small) {
          CHECK(ext.multiply(ext.multiply(x, y), z) == ext.multiply(x, ext.multiply(y, z)));
          const auto w = small.front();
          CHECK(ext.multiply(x, ext.bracket(y, z, w)) ==
                ext.bracket(ext.multiply(x, y), ext.multiply(x, z), ext.multiply(x, w)));
          CHECK(ext.multiply(ext.bracket(y, z, w), x) ==
                ext.bracket(ext.multiply(y, x), ext.multiply(z, x), ext.multiply(w, x)));
        }
      }
    }
  }
}

TEST_CASE("unital extension products do not depend on representatives") {
  auto t = truss_from_ring(2);
  UnitalExtension ext(t);
  const auto& cop = ext.coproduct();
  const auto ball = ext.ball(2);
  for (const auto& x : ball) {
    for (const auto& y : ball) {
      // Non-minimal representative: pad the unfolded words.
      AlternatingWord u = cop.unfold(x), v = cop.unfold(y);
      u.insert(u.begin() + 1, {Letter{1, 0}, Letter{1, 0}});
      v.insert(v.end(), {Letter{0, 1}, Letter{0, 1}});
      std::swap(u[0], u[2]);
      WeightedWord grid;
      for (std::size_t i = 0; i < u.size(); ++i) {
        for (std::size_t j = 0; j < v.size(); ++j) {
          grid.emplace_back(ext.letter_product(u[i], v[j]), (i + j) % 2 == 0 ? 1 : -1);
        }
      }
      CHECK(cop.fold(grid) == ext.multiply(x, y));
    }
  }
}

TEST_CASE("extension of truss morphisms to the unital extension") {
  auto t = truss_from_ring(2);
  auto ext = std::make_shared<const UnitalExtension>(t);
  const auto f = extend_to_unital(ext, t, {0, 1});
  CHECK(f(ext->unit()) == 1);
  for (Index a = 0; a < 2; ++a) CHECK(f(ext->embed(a)) == a);
  const auto ball = ext->ball(2);
  for (const auto& x : ball) {
    for (const auto& y : ball) CHECK(f(ext->multiply(x, y)) == t->mul(f(x), f(y)));
  }

  // Every heap morphism T⁺ → S is fixed by a heap morphism T → S and the
  // image of ∗.  Exactly one of them is unital, extends f and multiplies.
  std::size_t hits = 0;
  for (const auto& h : enumerate_heap_morphisms(t->heap_ptr(), t->heap_ptr())) {
    for (Index s = 0; s < 2; ++s) {
      auto g = [&](const CoproductElement& x) {
        SparseRow terms;
        const auto w = ext->coproduct().unfold(x);
        for (std::size_t i = 0; i < w.size(); ++i) {
          terms.emplace_back(w[i].summand == 1 ? s : h(w[i].element), i % 2 == 0 ? 1 : -1);
        }
        return t->heap().affine_sum(terms);
      };
      bool ok = g(ext->unit()) == 1 && g(ext->embed(0)) == 0 && g(ext->embed(1)) == 1;
      for (const auto& x : ball) {
        for (const auto& y : ball) ok = ok && g(ext->multiply(x, y)) == t->mul(g(x), g(y));
      }
      hits += ok;
    }
  }
  CHECK(hits == 1);

  auto star = truss_from_ring(1);
  const auto to_star = extend_to_unital(ext, star, {0, 0});
  for (const auto& x : ball) CHECK(to_star(x) == 0);
  CHECK_THROWS_AS(extend_to_unital(ext, t, {1, 0}), DomainError);
}
