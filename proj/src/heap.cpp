#include "trusskit/heap.hpp"

#include <algorithm>
#include <numeric>

#include "trusskit/lattice.hpp"

namespace trusskit {

FiniteAbelianHeap::FiniteAbelianHeap(std::vector<std::string> labels, Index base,
                                     std::vector<Index> add)
    : n_(labels.size()), base_(base), labels_(std::move(labels)), add_(std::move(add)) {
  if (add_.size() != n_ * n_) throw DomainError("retract table must be n x n");
  if (n_ == 0) {
    base_ = 0;
    return;
  }
  if (base_ >= n_) throw DomainError("base index out of range");
  for (Index v : add_) {
    if (v >= n_) throw DomainError("retract table entry out of range");
  }
  for (Index a = 0; a < n_; ++a) {
    if (this->add(base_, a) != a || this->add(a, base_) != a) {
      throw DomainError("base is not an identity of the retract table");
    }
  }
  neg_.assign(n_, 0);
  for (Index a = 0; a < n_; ++a) {
    Index b = 0;
    while (b < n_ && this->add(a, b) != base_) ++b;
    if (b == n_) throw DomainError("element " + labels_[a] + " has no inverse in the retract table");
    neg_[a] = b;
  }
}

Index FiniteAbelianHeap::multi_bracket(std::span<const Index> xs) const {
  if (xs.size() % 2 == 0) throw DomainError("multi-bracket needs an odd number of arguments");
  Index acc = xs[0];
  for (std::size_t i = 1; i + 1 < xs.size(); i += 2) acc = bracket(acc, xs[i], xs[i + 1]);
  return acc;
}

Index FiniteAbelianHeap::scale(std::int64_t k, Index x) const {
  const auto n = static_cast<std::int64_t>(n_);
  std::int64_t r = k % n;
  if (r < 0) r += n;
  Index acc = base_;
  Index pow = x;
  auto e = static_cast<std::uint64_t>(r);
  while (e != 0) {
    if (e & 1U) acc = add(acc, pow);
    pow = add(pow, pow);
    e >>= 1U;
  }
  return acc;
}

Index FiniteAbelianHeap::scale(const Integer& k, Index x) const {
  return scale(static_cast<std::int64_t>(mod_reduce(k, n_)), x);
}

Index FiniteAbelianHeap::affine_sum(const SparseRow& terms) const {
  if (n_ == 0) throw DomainError("affine combination in the empty heap");
  std::int64_t total = 0;
  Index acc = base_;
  for (const auto& [x, c] : terms) {
    total = checked_add(total, c);
    acc = add(acc, scale(c, sub(x, base_)));
  }
  if (total != 1) throw DomainError("affine combination coefficients must sum to 1");
  return acc;
}

Index FiniteAbelianHeap::affine_sum(const std::vector<std::pair<Index, Integer>>& terms) const {
  if (n_ == 0) throw DomainError("affine combination in the empty heap");
  Integer total = 0;
  Index acc = base_;
  for (const auto& [x, c] : terms) {
    total += c;
    acc = add(acc, scale(c, sub(x, base_)));
  }
  if (total != 1) throw DomainError("affine combination coefficients must sum to 1");
  return acc;
}

FiniteAbelianHeap FiniteAbelianHeap::rebased(Index e) const {
  std::vector<Index> t(n_ * n_);
  for (Index a = 0; a < n_; ++a) {
    for (Index b = 0; b < n_; ++b) t[a * n_ + b] = bracket(a, e, b);
  }
  return FiniteAbelianHeap(labels_, e, std::move(t));
}

FiniteAbelianHeap FiniteAbelianHeap::relabeled(std::vector<std::string> labels) const {
  if (labels.size() != n_) throw DomainError("label count mismatch");
  FiniteAbelianHeap h = *this;
  h.labels_ = std::move(labels);
  return h;
}

HeapPtr make_heap(FiniteAbelianHeap h) { return std::make_shared<const FiniteAbelianHeap>(std::move(h)); }

HeapPtr empty_heap() { return make_heap(FiniteAbelianHeap()); }

HeapPtr star_heap() { return cyclic_heap(1); }

HeapPtr cyclic_heap(std::size_t n) {
  if (n == 0) throw DomainError("H(Z_n) needs n >= 1");
  return abelian_group_heap({n});
}

HeapPtr abelian_group_heap(const std::vector<std::uint64_t>& orders) {
  std::size_t total = 1;
  for (auto d : orders) {
    if (d == 0) throw DomainError("cyclic factor of order 0");
    total *= d;
  }
  auto digits = [&](std::size_t idx) {
    std::vector<std::uint64_t> out(orders.size());
    for (std::size_t i = orders.size(); i-- > 0;) {
      out[i] = idx % orders[i];
      idx /= orders[i];
    }
    return out;
  };
  std::vector<std::vector<std::uint64_t>> all(total);
  std::vector<std::string> labels(total);
  for (std::size_t i = 0; i < total; ++i) {
    all[i] = digits(i);
    if (orders.size() == 1) {
      labels[i] = std::to_string(all[i][0]);
    } else {
      std::string s = "(";
      for (std::size_t j = 0; j < all[i].size(); ++j) {
        if (j) s += ",";
        s += std::to_string(all[i][j]);
      }
      labels[i] = s + ")";
    }
  }
  std::vector<Index> add(total * total);
  for (std::size_t a = 0; a < total; ++a) {
    for (std::size_t b = 0; b < total; ++b) {
      std::size_t idx = 0;
      for (std::size_t j = 0; j < orders.size(); ++j) {
        idx = idx * orders[j] + (all[a][j] + all[b][j]) % orders[j];
      }
      add[a * total + b] = static_cast<Index>(idx);
    }
  }
  return make_heap(FiniteAbelianHeap(std::move(labels), 0, std::move(add)));
}

HeapPtr product_heap(const FiniteAbelianHeap& h, const FiniteAbelianHeap& k) {
  const std::size_t n = h.size() * k.size();
  std::vector<std::string> labels(n);
  std::vector<Index> add(n * n);
  for (Index a = 0; a < h.size(); ++a) {
    for (Index b = 0; b < k.size(); ++b) labels[a * k.size() + b] = "(" + h.label(a) + "," + k.label(b) + ")";
  }
  for (std::size_t x = 0; x < n; ++x) {
    const auto xa = static_cast<Index>(x / k.size()), xb = static_cast<Index>(x % k.size());
    for (std::size_t y = 0; y < n; ++y) {
      const auto ya = static_cast<Index>(y / k.size()), yb = static_cast<Index>(y % k.size());
      add[x * n + y] = static_cast<Index>(h.add(xa, ya) * k.size() + k.add(xb, yb));
    }
  }
  const Index base = n == 0 ? 0 : static_cast<Index>(h.base() * k.size() + k.base());
  return make_heap(FiniteAbelianHeap(std::move(labels), base, std::move(add)));
}

// ---------------------------------------------------------------------------
// Validation

namespace {

constexpr std::size_t kLiteralAssocLimit = 32;  // n^5 ≤ 2^25

}  // namespace

ValidationReport validate_ternary(std::size_t n, const std::function<Index(Index, Index, Index)>& op) {
  ValidationReport rep;
  const auto N = static_cast<Index>(n);
  for (Index a = 0; a < N; ++a) {
    for (Index b = 0; b < N; ++b) {
      if (op(a, b, b) != a) rep.add("malcev [a,b,b]=a", {a, b});
      if (op(b, b, a) != a) rep.add("malcev [b,b,a]=a", {a, b});
    }
  }
  for (Index a = 0; a < N; ++a) {
    for (Index b = 0; b < N; ++b) {
      for (Index c = 0; c < N; ++c) {
        if (op(a, b, c) != op(c, b, a)) rep.add("commutativity", {a, b, c});
      }
    }
  }
  if (n <= kLiteralAssocLimit) {
    std::vector<Index> t(n * n * n);
    for (Index a = 0; a < N; ++a) {
      for (Index b = 0; b < N; ++b) {
        for (Index c = 0; c < N; ++c) t[(a * n + b) * n + c] = op(a, b, c);
      }
    }
    auto T = [&](Index a, Index b, Index c) { return t[(a * n + b) * n + c]; };
    for (Index a = 0; a < N; ++a) {
      for (Index b = 0; b < N; ++b) {
        for (Index c = 0; c < N; ++c) {
          const Index abc = T(a, b, c);
          for (Index d = 0; d < N; ++d) {
            for (Index e = 0; e < N; ++e) {
              if (T(abc, d, e) != T(a, b, T(c, d, e))) rep.add("associativity", {a, b, c, d, e});
            }
          }
        }
      }
    }
  } else {
    // With identity 0: a+b := [a,0,b], -a := [0,a,0].  The table is an
    // abelian heap iff (+) is an abelian group and [a,b,c] = (a + -b) + c.
    rep.reduced_checks.push_back("associativity via retract at 0");
    auto plus = [&](Index a, Index b) { return op(a, 0, b); };
    for (Index a = 0; a < N; ++a) {
      for (Index b = 0; b < N; ++b) {
        const Index ab = plus(a, b);
        for (Index c = 0; c < N; ++c) {
          if (plus(ab, c) != plus(a, plus(b, c))) rep.add("associativity", {a, 0, b, 0, c});
          if (op(a, b, c) != plus(plus(a, op(0, b, 0)), c)) rep.add("associativity", {a, b, c});
        }
      }
    }
  }
  return rep;
}

ValidationReport validate_heap(const FiniteAbelianHeap& h) {
  ValidationReport rep;
  const auto n = static_cast<Index>(h.size());
  for (Index a = 0; a < n; ++a) {
    if (h.add(h.base(), a) != a) rep.add("retract identity", {a});
    if (h.add(a, h.neg(a)) != h.base()) rep.add("retract inverse", {a});
    for (Index b = 0; b < n; ++b) {
      if (h.add(a, b) != h.add(b, a)) rep.add("retract commutativity", {a, b});
    }
  }
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b < n; ++b) {
      const Index ab = h.add(a, b);
      for (Index c = 0; c < n; ++c) {
        if (h.add(ab, c) != h.add(a, h.add(b, c))) rep.add("retract associativity", {a, b, c});
      }
    }
  }
  rep.merge(validate_ternary(h.size(), [&](Index a, Index b, Index c) { return h.bracket(a, b, c); }));
  return rep;
}

std::optional<FiniteAbelianHeap> heap_from_ternary(std::size_t n,
                                                   const std::function<Index(Index, Index, Index)>& op,
                                                   Index base) {
  if (!validate_ternary(n, op).ok()) return std::nullopt;
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = std::to_string(i);
  std::vector<Index> add(n * n);
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b < n; ++b) add[a * n + b] = op(a, base, b);
  }
  return FiniteAbelianHeap(std::move(labels), n == 0 ? 0 : base, std::move(add));
}

std::vector<Index> swap_iso(const FiniteAbelianHeap& h, Index e, Index f) {
  const auto n = static_cast<Index>(h.size());
  std::vector<Index> tau(n);
  for (Index a = 0; a < n; ++a) tau[a] = h.bracket(a, e, f);
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b < n; ++b) {
      if (tau[h.bracket(a, e, b)] != h.bracket(tau[a], f, tau[b])) {
        throw Error("swap map failed to be additive");
      }
    }
  }
  return tau;
}

// ---------------------------------------------------------------------------
// Sub-heaps and quotients

bool SubHeap::contains(Index x) const { return std::binary_search(members.begin(), members.end(), x); }

SubHeap make_subheap(const FiniteAbelianHeap& h, std::vector<Index> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  for (Index m : members) {
    if (m >= h.size()) throw DomainError("sub-heap member out of range");
  }
  return SubHeap{h.size(), std::move(members)};
}

bool is_closed(const FiniteAbelianHeap& h, const SubHeap& s) {
  if (s.empty()) return true;
  // Closed and non-empty ⟺ S ⊖ s0 is closed under subtraction.
  const Index s0 = s.members.front();
  for (Index a : s.members) {
    for (Index b : s.members) {
      if (!s.contains(h.bracket(a, b, s0))) return false;
    }
  }
  return true;
}

SubHeap generate_subheap(const FiniteAbelianHeap& h, const std::vector<Index>& seed) {
  if (seed.empty()) throw DomainError("the generated sub-heap needs a non-empty seed");
  const Index x0 = seed.front();
  std::vector<Index> gens;
  for (Index x : seed) {
    if (x >= h.size()) throw DomainError("seed element out of range");
    gens.push_back(h.sub(x, x0));
  }
  std::vector<char> in(h.size(), 0);
  std::vector<Index> group{h.base()};
  in[h.base()] = 1;
  for (std::size_t i = 0; i < group.size(); ++i) {
    for (Index g : gens) {
      const Index y = h.add(group[i], g);
      if (!in[y]) {
        in[y] = 1;
        group.push_back(y);
      }
    }
  }
  std::vector<Index> members;
  members.reserve(group.size());
  for (Index d : group) members.push_back(h.add(x0, d));
  return make_subheap(h, std::move(members));
}

HeapQuotient quotient_heap(const HeapPtr& hp, const SubHeap& s) {
  const FiniteAbelianHeap& h = *hp;
  if (s.empty()) throw DomainError("quotient by the empty sub-heap");
  if (s.ambient_size != h.size()) throw DomainError("sub-heap belongs to a different heap");
  if (!is_closed(h, s)) throw DomainError("quotient by a subset that is not a sub-heap");
  const Index s0 = s.members.front();
  std::vector<Index> diffs;
  for (Index m : s.members) diffs.push_back(h.sub(m, s0));

  const std::size_t n = h.size();
  std::vector<Index> cls(n, static_cast<Index>(-1));
  HeapQuotient q;
  for (Index x = 0; x < n; ++x) {
    if (cls[x] != static_cast<Index>(-1)) continue;
    const auto id = static_cast<Index>(q.classes.size());
    std::vector<Index> members;
    for (Index d : diffs) {
      const Index y = h.add(x, d);
      cls[y] = id;
      members.push_back(y);
    }
    std::sort(members.begin(), members.end());
    q.classes.push_back(std::move(members));
  }
  const std::size_t k = q.classes.size();
  std::vector<std::string> labels(k);
  for (std::size_t i = 0; i < k; ++i) labels[i] = "[" + h.label(q.classes[i].front()) + "]";
  std::vector<Index> add(k * k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) add[i * k + j] = cls[h.add(q.classes[i].front(), q.classes[j].front())];
  }
  q.heap = make_heap(FiniteAbelianHeap(std::move(labels), cls[h.base()], std::move(add)));
  q.projection = HeapMorphism{hp, q.heap, std::move(cls)};
  return q;
}

SubHeap kernel(const HeapMorphism& phi, Index e) {
  std::vector<Index> members;
  for (Index x = 0; x < phi.map.size(); ++x) {
    if (phi.map[x] == e) members.push_back(x);
  }
  if (members.empty()) throw DomainError("kernel base point is not in the image");
  return SubHeap{phi.map.size(), std::move(members)};
}

HeapMorphism factor_through(const HeapMorphism& phi, const SubHeap& s) {
  HeapQuotient q = quotient_heap(phi.domain, s);
  std::vector<Index> map(q.classes.size());
  for (std::size_t i = 0; i < q.classes.size(); ++i) {
    const Index v = phi.map[q.classes[i].front()];
    for (Index m : q.classes[i]) {
      if (phi.map[m] != v) throw DomainError("sub-heap congruence does not refine the kernel relation");
    }
    map[i] = v;
  }
  return HeapMorphism{q.heap, phi.codomain, std::move(map)};
}

bool is_heap_morphism(const FiniteAbelianHeap& h, const FiniteAbelianHeap& k, const std::vector<Index>& map) {
  if (map.size() != h.size()) return false;
  if (h.empty()) return true;
  for (Index v : map) {
    if (v >= k.size()) return false;
  }
  // φ preserves brackets ⟺ x ↦ φ(x) ⊖ φ(e) is additive on G(H;e).
  const Index fe = map[h.base()];
  for (Index a = 0; a < h.size(); ++a) {
    for (Index b = a; b < h.size(); ++b) {
      if (map[h.add(a, b)] != k.bracket(map[a], fe, map[b])) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Decomposition and morphism enumeration

CyclicDecomposition decompose(const FiniteAbelianHeap& h) {
  CyclicDecomposition out;
  const std::size_t n = h.size();
  if (n <= 1) {
    out.coords.assign(n * 0, 0);
    return out;
  }
  // Greedy triangular presentation: each new generator g_i with its order k_i
  // modulo the span of the previous ones.
  std::vector<Index> gens;
  std::vector<std::uint64_t> steps;
  std::vector<std::vector<std::int64_t>> rel_rows;
  std::vector<std::vector<std::uint64_t>> coord(n);
  std::vector<char> in(n, 0);
  std::vector<Index> span{h.base()};
  in[h.base()] = 1;
  coord[h.base()] = {};
  for (Index x = 0; x < n; ++x) {
    if (in[x]) continue;
    std::uint64_t k = 1;
    Index mult = x;
    while (!in[mult]) {
      mult = h.add(mult, x);
      ++k;
    }
    std::vector<std::int64_t> row(gens.size() + 1, 0);
    for (std::size_t j = 0; j < gens.size(); ++j) row[j] = -static_cast<std::int64_t>(coord[mult][j]);
    row[gens.size()] = static_cast<std::int64_t>(k);
    rel_rows.push_back(std::move(row));
    std::vector<Index> next;
    next.reserve(span.size() * k);
    for (std::uint64_t a = 0; a < k; ++a) {
      const Index shift = h.scale(static_cast<std::int64_t>(a), x);
      for (Index s : span) {
        const Index y = h.add(s, shift);
        if (a != 0) {
          in[y] = 1;
          coord[y] = coord[s];
          coord[y].push_back(a);
        }
        next.push_back(y);
      }
    }
    for (Index s : span) coord[s].push_back(0);
    span = std::move(next);
    gens.push_back(x);
    steps.push_back(k);
  }
  const std::size_t r = gens.size();
  IntMatrix A(r, IntVector(r, 0));
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < rel_rows[i].size(); ++j) A[i][j] = static_cast<long>(rel_rows[i][j]);
  }
  SmithForm snf = smith_nf(A, r);
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < r; ++i) {
    if (snf.diagonal[i] != 1) keep.push_back(i);
  }
  for (std::size_t i : keep) {
    Index g = h.base();
    for (std::size_t j = 0; j < r; ++j) g = h.add(g, h.scale(snf.V_inverse[i][j], gens[j]));
    out.generators.push_back(g);
    out.orders.push_back(snf.diagonal[i].get_ui());
  }
  const std::size_t s = keep.size();
  out.coords.assign(n * s, 0);
  for (Index x = 0; x < n; ++x) {
    for (std::size_t t = 0; t < s; ++t) {
      Integer acc = 0;
      for (std::size_t j = 0; j < r; ++j) acc += static_cast<unsigned long>(coord[x][j]) * snf.V[j][keep[t]];
      out.coords[x * s + t] = mod_reduce(acc, out.orders[t]);
    }
  }
  return out;
}

void for_each_heap_morphism(const FiniteAbelianHeap& h, const FiniteAbelianHeap& k,
                            const std::function<void(const std::vector<Index>&)>& visit) {
  for_each_heap_morphism_while(h, k, [&](const std::vector<Index>& m) {
    visit(m);
    return true;
  });
}

bool for_each_heap_morphism_while(const FiniteAbelianHeap& h, const FiniteAbelianHeap& k,
                                  const std::function<bool(const std::vector<Index>&)>& visit) {
  if (h.empty()) return visit({});
  if (k.empty()) return true;
  const CyclicDecomposition dec = decompose(h);
  const std::size_t s = dec.rank();
  std::vector<std::vector<Index>> choices(s);
  for (std::size_t i = 0; i < s; ++i) {
    for (Index y = 0; y < k.size(); ++y) {
      if (k.scale(static_cast<std::int64_t>(dec.orders[i]), y) == k.base()) choices[i].push_back(y);
    }
  }
  std::vector<std::size_t> pick(s, 0);
  std::vector<Index> psi(h.size()), map(h.size());
  for (;;) {
    for (Index x = 0; x < h.size(); ++x) {
      Index acc = k.base();
      for (std::size_t i = 0; i < s; ++i) {
        const std::uint64_t c = dec.coords[x * s + i];
        if (c) acc = k.add(acc, k.scale(static_cast<std::int64_t>(c), choices[i][pick[i]]));
      }
      psi[x] = acc;
    }
    for (Index f = 0; f < k.size(); ++f) {
      for (Index x = 0; x < h.size(); ++x) map[x] = k.add(psi[x], f);
      if (!visit(map)) return false;
    }
    std::size_t i = s;
    while (i > 0) {
      --i;
      if (++pick[i] < choices[i].size()) break;
      pick[i] = 0;
      if (i == 0) return true;
    }
    if (s == 0) return true;
  }
}

std::vector<HeapMorphism> enumerate_heap_morphisms(const HeapPtr& h, const HeapPtr& k) {
  std::vector<HeapMorphism> out;
  for_each_heap_morphism(*h, *k, [&](const std::vector<Index>& m) { out.push_back(HeapMorphism{h, k, m}); });
  return out;
}

Integer count_heap_morphisms(const FiniteAbelianHeap& h, const FiniteAbelianHeap& k) {
  if (h.empty()) return 1;
  if (k.empty()) return 0;
  const CyclicDecomposition dec = decompose(h);
  Integer total = static_cast<unsigned long>(k.size());
  for (std::size_t i = 0; i < dec.rank(); ++i) {
    unsigned long c = 0;
    for (Index y = 0; y < k.size(); ++y) {
      if (k.scale(static_cast<std::int64_t>(dec.orders[i]), y) == k.base()) ++c;
    }
    total *= c;
  }
  return total;
}

std::optional<std::vector<Index>> find_heap_isomorphism(const FiniteAbelianHeap& h, const FiniteAbelianHeap& k) {
  if (h.size() != k.size()) return std::nullopt;
  std::optional<std::vector<Index>> found;
  if (h.empty()) return std::vector<Index>{};
  for_each_heap_morphism_while(h, k, [&](const std::vector<Index>& m) {
    std::vector<char> hit(k.size(), 0);
    for (Index v : m) {
      if (hit[v]) return true;
      hit[v] = 1;
    }
    found = m;
    return false;
  });
  return found;
}

std::vector<Index> image_of(const std::vector<Index>& map) {
  std::vector<Index> img = map;
  std::sort(img.begin(), img.end());
  img.erase(std::unique(img.begin(), img.end()), img.end());
  return img;
}

}  // namespace trusskit
