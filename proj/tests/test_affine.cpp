#include <random>

#include "doctest.h"
#include "trusskit/affine.hpp"

using namespace trusskit;

TEST_CASE("free heap word reduction") {
  const std::vector<Index> x{0}, xyy{0, 1, 1}, xyxyx{0, 1, 0, 1, 0};
  CHECK(reduce_word(x) == AffineVector::generator(0));
  CHECK(reduce_word(xyy) == AffineVector::generator(0));
  const AffineVector v = reduce_word(xyxyx);
  CHECK(v.coefficient(0) == 3);
  CHECK(v.coefficient(1) == -2);
  CHECK(v.to_string({"x", "y"}) == "affine {x:3, y:-2}");
  const std::vector<Index> even{0, 1};
  CHECK_THROWS_AS(reduce_word(even), DomainError);
  CHECK_THROWS_AS(AffineVector::from_coefficients({{0, 2}}), DomainError);
}

TEST_CASE("word reduction is invariant under symmetric-word moves") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Index> w(1 + 2 * (trial % 5));
    for (auto& x : w) x = rng() % 4;
    const AffineVector ref = reduce_word(w);
    // Adjacent duplicate pair.
    std::vector<Index> ins = w;
    const std::size_t pos = rng() % (w.size() + 1);
    const Index g = rng() % 4;
    ins.insert(ins.begin() + static_cast<long>(pos), {g, g});
    CHECK(reduce_word(ins) == ref);
    // Swap two letters of equal parity.
    if (w.size() >= 3) {
      std::vector<Index> sw = w;
      const std::size_t i = rng() % w.size();
      const std::size_t same_parity = (w.size() - i % 2 + 1) / 2;
      const std::size_t j = i % 2 + 2 * (rng() % same_parity);
      std::swap(sw[i], sw[j]);
      CHECK(reduce_word(sw) == ref);
    }
  }
}

TEST_CASE("binary coproduct folds") {
  const HeapCoproduct cop({cyclic_heap(2), cyclic_heap(3)});
  CHECK(cop.fold(AlternatingWord{{0, 1}}) == CoproductElement{{1, 0}, {0}});
  CHECK(cop.fold(AlternatingWord{{1, 2}}) == CoproductElement{{0, 2}, {1}});
  CHECK(cop.fold(AlternatingWord{{0, 0}}) == cop.base_point());
  // m n e_N  →  (m ⊖ e_M, e_N ⊖ n | 0)
  CHECK(cop.fold(AlternatingWord{{0, 1}, {1, 2}, {1, 0}}) == CoproductElement{{1, 1}, {0}});
  CHECK(cop.format(CoproductElement{{1, 2}, {-3}}) == "cop (1,2 | -3)");
  CHECK_THROWS_AS(cop.fold(AlternatingWord{{0, 1}, {1, 0}}), DomainError);
}

TEST_CASE("unfold is a section of fold") {
  const HeapCoproduct cop({cyclic_heap(2), cyclic_heap(3)});
  const AlternatingWord base = cop.unfold(cop.base_point());
  CHECK(base == AlternatingWord{{0, 0}, {1, 0}, {1, 0}});
  CHECK(cop.unfold(CoproductElement{{1, 2}, {0}}).size() == 3);
  const AlternatingWord two = cop.unfold(CoproductElement{{0, 0}, {2}});
  CHECK(two.size() == 7);
  CHECK(cop.fold(two) == CoproductElement{{0, 0}, {2}});
  for (const auto& x : cop.ball(3)) CHECK(cop.fold(cop.unfold(x)) == x);

  const HeapCoproduct four({cyclic_heap(2), star_heap(), cyclic_heap(3), cyclic_heap(2)});
  for (const auto& x : four.ball(1)) CHECK(four.fold(four.unfold(x)) == x);
}

TEST_CASE("fold is invariant under congruence moves on random words") {
  const HeapCoproduct cop({cyclic_heap(3), cyclic_heap(2), cyclic_heap(4)});
  std::mt19937 rng(5);
  auto letter = [&] {
    const std::size_t s = rng() % 3;
    return Letter{s, static_cast<Index>(rng() % cop.summand(s).size())};
  };
  for (int trial = 0; trial < 300; ++trial) {
    AlternatingWord w(1 + 2 * (trial % 6));
    for (auto& l : w) l = letter();
    const CoproductElement ref = cop.fold(w);
    AlternatingWord ins = w;
    const Letter g = letter();
    const std::size_t pos = rng() % (w.size() + 1);
    ins.insert(ins.begin() + static_cast<long>(pos), {g, g});
    CHECK(cop.fold(ins) == ref);
    // Three consecutive letters of one summand at an even position collapse
    // to their bracket.
    const std::size_t s = rng() % 3;
    const auto& h = cop.summand(s);
    const Index a = rng() % h.size(), b = rng() % h.size(), c = rng() % h.size();
    AlternatingWord expanded{Letter{s, a}, Letter{s, b}, Letter{s, c}};
    AlternatingWord collapsed{Letter{s, h.bracket(a, b, c)}};
    expanded.insert(expanded.end(), w.begin() + 1, w.end());
    collapsed.insert(collapsed.end(), w.begin() + 1, w.end());
    CHECK(cop.fold(expanded) == cop.fold(collapsed));
    AlternatingWord u(1 + 2 * (rng() % 3)), v(1 + 2 * (rng() % 3));
    for (auto& l : u) l = letter();
    for (auto& l : v) l = letter();
    // w ++ u ++ v puts u at odd positions, so it folds to [w, u, v].
    AlternatingWord cat = w;
    cat.insert(cat.end(), u.begin(), u.end());
    cat.insert(cat.end(), v.begin(), v.end());
    CHECK(cop.fold(cat) == cop.bracket(ref, cop.fold(u), cop.fold(v)));
  }
}

TEST_CASE("direct-sum description of binary coproducts") {
  const std::vector<HeapPtr> hs{cyclic_heap(2), cyclic_heap(3)};
  for (const auto& m : hs) {
    for (const auto& n : hs) CHECK(check_iso_direct(m, n, 3).ok());
  }
  CHECK(check_iso_direct(star_heap(), star_heap(), 3).ok());
  const HeapCoproduct stars({star_heap(), star_heap()});
  CHECK(stars.inject(0, 0) != stars.inject(1, 0));
  CHECK(stars.ball(3).size() == 7);
}

TEST_CASE("tail length") {
  const HeapCoproduct tt({cyclic_heap(2), cyclic_heap(2)});
  CHECK(tail_length(tt.inject(0, 1)) == 0);
  CHECK(tail_length(tt.inject(1, 1)) == 1);
  const auto ball = tt.ball(2);
  for (const auto& x : ball) {
    for (const auto& y : ball) {
      CHECK(tail_length(tt.bracket(x, y, ball[3])) == tail_length(x) - tail_length(y) + tail_length(ball[3]));
    }
  }
}

TEST_CASE("left-nested re-bracketing is a heap isomorphism") {
  const HeapCoproduct flat({cyclic_heap(2), cyclic_heap(3), cyclic_heap(2)});
  const HeapCoproduct inner({cyclic_heap(2), cyclic_heap(3)});
  const auto ball = flat.ball(1);
  for (const auto& x : ball) CHECK(from_left_nested(flat, to_left_nested(flat, x)) == x);
  std::mt19937 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    AlternatingWord w(1 + 2 * (trial % 5));
    for (auto& l : w) {
      l.summand = rng() % 3;
      l.element = static_cast<Index>(rng() % flat.summand(l.summand).size());
    }
    // Fold the word two levels deep: inner letters first, then the outer part.
    std::vector<std::pair<CoproductElement, std::int64_t>> inner_terms;
    std::int64_t inner_weight = 0;
    LeftNestedElement nested;
    Index last = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const std::int64_t sign = i % 2 == 0 ? 1 : -1;
      if (w[i].summand < 2) {
        inner_terms.emplace_back(inner.inject(w[i].summand, w[i].element), sign);
        inner_weight += sign;
      } else {
        const auto& h = flat.summand(2);
        last = sign > 0 ? h.add(last, w[i].element) : h.sub(last, w[i].element);
        nested.tail += sign;
      }
    }
    // Remaining weight sits at the inner base point.
    inner_terms.emplace_back(inner.base_point(), 1 - inner_weight);
    nested.inner = inner.affine_sum(inner_terms);
    nested.last = last;
    CHECK(to_left_nested(flat, flat.fold(w)) == nested);
  }
}
