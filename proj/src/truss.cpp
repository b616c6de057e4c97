#include "trusskit/truss.hpp"

#include <map>

namespace trusskit {

FiniteTruss::FiniteTruss(HeapPtr heap, std::vector<Index> mult, std::optional<Index> unit)
    : heap_(std::move(heap)), mult_(std::move(mult)), unit_(unit) {
  const std::size_t n = heap_->size();
  if (mult_.size() != n * n) throw DomainError("multiplication table must be n x n");
  for (Index v : mult_) {
    if (v >= n) throw DomainError("multiplication table entry out of range");
  }
  if (unit_ && *unit_ >= n) throw DomainError("unit index out of range");
}

TrussPtr make_truss(FiniteTruss t) { return std::make_shared<const FiniteTruss>(std::move(t)); }

namespace {

constexpr std::size_t kLiteralDistLimit = 64;  // n^4 ≤ 2^24

}  // namespace

ValidationReport validate_truss(const FiniteTruss& t) {
  ValidationReport rep = validate_heap(t.heap());
  const auto& h = t.heap();
  const auto n = static_cast<Index>(t.size());
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b < n; ++b) {
      const Index ab = t.mul(a, b);
      for (Index c = 0; c < n; ++c) {
        if (t.mul(ab, c) != t.mul(a, t.mul(b, c))) rep.add("multiplicative associativity", {a, b, c});
      }
    }
  }
  if (n <= kLiteralDistLimit) {
    for (Index s = 0; s < n; ++s) {
      for (Index a = 0; a < n; ++a) {
        for (Index b = 0; b < n; ++b) {
          for (Index c = 0; c < n; ++c) {
            const Index abc = h.bracket(a, b, c);
            if (t.mul(s, abc) != h.bracket(t.mul(s, a), t.mul(s, b), t.mul(s, c))) {
              rep.add("left distributivity", {s, a, b, c});
            }
            if (t.mul(abc, s) != h.bracket(t.mul(a, s), t.mul(b, s), t.mul(c, s))) {
              rep.add("right distributivity", {s, a, b, c});
            }
          }
        }
      }
    }
  } else {
    rep.reduced_checks.push_back("left distributivity via retract");
    rep.reduced_checks.push_back("right distributivity via retract");
    const Index e = h.base();
    for (Index s = 0; s < n; ++s) {
      const Index se = t.mul(s, e), es = t.mul(e, s);
      for (Index a = 0; a < n; ++a) {
        for (Index b = 0; b < n; ++b) {
          const Index ab = h.add(a, b);
          if (t.mul(s, ab) != h.bracket(t.mul(s, a), se, t.mul(s, b))) rep.add("left distributivity", {s, a, e, b});
          if (t.mul(ab, s) != h.bracket(t.mul(a, s), es, t.mul(b, s))) rep.add("right distributivity", {s, a, e, b});
        }
      }
    }
  }
  if (t.unit()) {
    const Index u = *t.unit();
    for (Index a = 0; a < n; ++a) {
      if (t.mul(u, a) != a || t.mul(a, u) != a) rep.add("unit", {u, a});
    }
  }
  return rep;
}

std::optional<Index> find_unit(const FiniteAbelianHeap& heap, const std::vector<Index>& mult) {
  const std::size_t n = heap.size();
  for (Index u = 0; u < n; ++u) {
    bool ok = true;
    for (Index a = 0; a < n && ok; ++a) ok = mult[u * n + a] == a && mult[a * n + u] == a;
    if (ok) return u;
  }
  return std::nullopt;
}

TrussPtr truss_from_ring(std::size_t n) {
  HeapPtr h = cyclic_heap(n);
  std::vector<Index> mult(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) mult[a * n + b] = static_cast<Index>(a * b % n);
  }
  return make_truss(FiniteTruss(h, std::move(mult), static_cast<Index>(1 % n)));
}

TrussPtr odd_residues_truss(std::size_t modulus) {
  if (modulus < 2 || (modulus & (modulus - 1)) != 0) throw DomainError("odd residues need a power-of-two modulus");
  std::vector<std::size_t> values;
  for (std::size_t v = 1; v < modulus; v += 2) values.push_back(v);
  const std::size_t n = values.size();
  auto index_of = [&](std::size_t v) { return static_cast<Index>((v % modulus) / 2); };
  std::vector<std::string> labels;
  for (auto v : values) labels.push_back(std::to_string(v));
  // Retract at 1: a + b := [a,1,b] = a - 1 + b.
  std::vector<Index> add(n * n), mult(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      add[i * n + j] = index_of(values[i] + values[j] + modulus - 1);
      mult[i * n + j] = index_of(values[i] * values[j]);
    }
  }
  HeapPtr h = make_heap(FiniteAbelianHeap(std::move(labels), 0, std::move(add)));
  return make_truss(FiniteTruss(h, std::move(mult), Index{0}));
}

TrussPtr matrix_truss(const FiniteTruss& t, std::size_t n, std::size_t max_size) {
  if (n == 0 || n % 2 == 0) throw DomainError("matrix truss needs an odd dimension");
  const std::size_t q = t.size();
  const std::size_t entries = n * n;
  double estimate = 1;
  for (std::size_t k = 0; k < entries; ++k) estimate *= static_cast<double>(q);
  if (estimate > static_cast<double>(max_size)) throw SizeLimitError("matrix truss exceeds the size guard");
  const auto total = static_cast<std::size_t>(estimate);

  std::vector<std::vector<Index>> digits(total, std::vector<Index>(entries));
  for (std::size_t x = 0; x < total; ++x) {
    std::size_t r = x;
    for (std::size_t k = entries; k-- > 0;) {
      digits[x][k] = static_cast<Index>(r % q);
      r /= q;
    }
  }
  auto encode = [&](const std::vector<Index>& d) {
    std::size_t idx = 0;
    for (Index v : d) idx = idx * q + v;
    return static_cast<Index>(idx);
  };
  const auto& h = t.heap();
  std::vector<std::string> labels(total);
  for (std::size_t x = 0; x < total; ++x) {
    std::string s = "(";
    for (std::size_t k = 0; k < entries; ++k) {
      if (k) s += (k % n == 0) ? ";" : ",";
      s += h.label(digits[x][k]);
    }
    labels[x] = s + ")";
  }
  std::vector<Index> add(total * total), mult(total * total);
  std::vector<Index> d(entries), products(n);
  for (std::size_t x = 0; x < total; ++x) {
    for (std::size_t y = 0; y < total; ++y) {
      for (std::size_t k = 0; k < entries; ++k) d[k] = h.add(digits[x][k], digits[y][k]);
      add[x * total + y] = encode(d);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          for (std::size_t k = 0; k < n; ++k) products[k] = t.mul(digits[x][i * n + k], digits[y][k * n + j]);
          d[i * n + j] = h.multi_bracket(products);
        }
      }
      mult[x * total + y] = encode(d);
    }
  }
  const std::vector<Index> base_digits(entries, h.base());
  HeapPtr heap = make_heap(FiniteAbelianHeap(std::move(labels), encode(base_digits), std::move(add)));
  const std::optional<Index> unit = find_unit(*heap, mult);
  return make_truss(FiniteTruss(heap, std::move(mult), unit));
}

TrussPtr opposite(const FiniteTruss& t) {
  const std::size_t n = t.size();
  std::vector<Index> mult(n * n);
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b < n; ++b) mult[a * n + b] = t.mul(b, a);
  }
  return make_truss(FiniteTruss(t.heap_ptr(), std::move(mult), t.unit()));
}

std::optional<Index> EndomorphismTruss::index_of(const std::vector<Index>& f) const {
  for (std::size_t i = 0; i < maps.size(); ++i) {
    if (maps[i] == f) return static_cast<Index>(i);
  }
  return std::nullopt;
}

EndomorphismTruss endomorphism_truss(const HeapPtr& hp, std::size_t max_heap) {
  const auto& h = *hp;
  if (h.size() > max_heap) throw SizeLimitError("E(H) is materialized only for small heaps");
  EndomorphismTruss out;
  for_each_heap_morphism(h, h, [&](const std::vector<Index>& f) { out.maps.push_back(f); });
  const std::size_t k = out.maps.size();
  std::map<std::vector<Index>, Index> lookup;
  for (std::size_t i = 0; i < k; ++i) lookup.emplace(out.maps[i], static_cast<Index>(i));
  std::vector<std::string> labels(k);
  for (std::size_t i = 0; i < k; ++i) {
    std::string s = "map(";
    for (std::size_t x = 0; x < h.size(); ++x) s += (x ? "," : "") + h.label(out.maps[i][x]);
    labels[i] = s + ")";
  }
  std::vector<Index> add(k * k), mult(k * k), f(h.size());
  const auto& base = out.maps[0];
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      for (Index x = 0; x < h.size(); ++x) f[x] = h.bracket(out.maps[i][x], base[x], out.maps[j][x]);
      add[i * k + j] = lookup.at(f);
      for (Index x = 0; x < h.size(); ++x) f[x] = out.maps[i][out.maps[j][x]];
      mult[i * k + j] = lookup.at(f);
    }
  }
  std::vector<Index> id(h.size());
  for (Index x = 0; x < h.size(); ++x) id[x] = x;
  HeapPtr heap = make_heap(FiniteAbelianHeap(std::move(labels), 0, std::move(add)));
  out.truss = make_truss(FiniteTruss(heap, std::move(mult), lookup.at(id)));
  return out;
}

std::vector<Index> left_absorbers(const FiniteTruss& t) {
  std::vector<Index> out;
  for (Index a = 0; a < t.size(); ++a) {
    bool ok = true;
    for (Index s = 0; s < t.size() && ok; ++s) ok = t.mul(s, a) == a;
    if (ok) out.push_back(a);
  }
  return out;
}

std::vector<Index> two_sided_absorbers(const FiniteTruss& t) {
  std::vector<Index> out;
  for (Index a : left_absorbers(t)) {
    bool ok = true;
    for (Index s = 0; s < t.size() && ok; ++s) ok = t.mul(a, s) == a;
    if (ok) out.push_back(a);
  }
  return out;
}

bool is_truss_morphism(const FiniteTruss& t, const FiniteTruss& s, const std::vector<Index>& map) {
  if (!is_heap_morphism(t.heap(), s.heap(), map)) return false;
  for (Index a = 0; a < t.size(); ++a) {
    for (Index b = 0; b < t.size(); ++b) {
      if (map[t.mul(a, b)] != s.mul(map[a], map[b])) return false;
    }
  }
  return true;
}

std::vector<std::vector<Index>> enumerate_truss_morphisms(const FiniteTruss& t, const FiniteTruss& s) {
  std::vector<std::vector<Index>> out;
  for_each_heap_morphism(t.heap(), s.heap(), [&](const std::vector<Index>& f) {
    for (Index a = 0; a < t.size(); ++a) {
      for (Index b = 0; b < t.size(); ++b) {
        if (f[t.mul(a, b)] != s.mul(f[a], f[b])) return;
      }
    }
    out.push_back(f);
  });
  return out;
}

// ---------------------------------------------------------------------------
// Unital extension

UnitalExtension::UnitalExtension(TrussPtr t) : base_(std::move(t)) {
  if (base_->heap().empty()) throw DomainError("unital extension of the empty truss is not built (it is ⋆)");
  cop_ = HeapCoproduct({base_->heap_ptr(), star_heap()});
}

Letter UnitalExtension::letter_product(const Letter& a, const Letter& b) const {
  if (a.summand == 1 && b.summand == 1) return Letter{1, 0};
  if (a.summand == 1) return b;
  if (b.summand == 1) return a;
  return Letter{0, base_->mul(a.element, b.element)};
}

CoproductElement UnitalExtension::multiply(const CoproductElement& x, const CoproductElement& y) const {
  const AlternatingWord u = cop_.unfold(x), v = cop_.unfold(y);
  WeightedWord grid;
  grid.reserve(u.size() * v.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    for (std::size_t j = 0; j < v.size(); ++j) {
      const std::int64_t sign = ((i + j) % 2 == 0) ? 1 : -1;
      grid.emplace_back(letter_product(u[i], v[j]), sign);
    }
  }
  return cop_.fold(grid);
}

UnitalExtensionMorphism::UnitalExtensionMorphism(UnitalPtr ext, TrussPtr target, std::vector<Index> f)
    : ext_(std::move(ext)), target_(std::move(target)), f_(std::move(f)) {
  if (!target_->is_unital()) throw DomainError("extension target must be unital");
  if (!is_truss_morphism(*ext_->base(), *target_, f_)) throw DomainError("map is not a truss morphism");
}

Index UnitalExtensionMorphism::operator()(const CoproductElement& x) const {
  const AlternatingWord w = ext_->coproduct().unfold(x);
  SparseRow terms;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Index v = w[i].summand == 1 ? *target_->unit() : f_[w[i].element];
    terms.emplace_back(v, i % 2 == 0 ? 1 : -1);
  }
  return target_->heap().affine_sum(terms);
}

UnitalExtensionMorphism extend_to_unital(const UnitalPtr& ext, const TrussPtr& target, const std::vector<Index>& f) {
  return UnitalExtensionMorphism(ext, target, f);
}

}  // namespace trusskit
