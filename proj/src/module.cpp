#include "trusskit/module.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace trusskit {

FiniteModule::FiniteModule(TrussPtr truss, HeapPtr heap, std::vector<Index> action, Side side)
    : truss_(std::move(truss)), heap_(std::move(heap)), action_(std::move(action)), side_(side) {
  if (action_.size() != truss_->size() * heap_->size()) throw DomainError("action table must be |T| x |M|");
  for (Index v : action_) {
    if (v >= heap_->size()) throw DomainError("action table entry out of range");
  }
}

FiniteModule FiniteModule::with_side(Side side, TrussPtr truss) const {
  return FiniteModule(std::move(truss), heap_, action_, side);
}

ModulePtr make_module(FiniteModule m) { return std::make_shared<const FiniteModule>(std::move(m)); }

namespace {

constexpr double kLiteralScanLimit = 16777216.0;  // 2^24 instances

}  // namespace

ValidationReport validate_module(const FiniteModule& mod, bool unital) {
  ValidationReport rep = validate_heap(mod.heap());
  const auto& t = mod.truss();
  const auto& h = mod.heap();
  const auto nt = static_cast<Index>(t.size()), nm = static_cast<Index>(mod.size());
  const bool left = mod.side() == Side::Left;
  for (Index s = 0; s < nt; ++s) {
    for (Index r = 0; r < nt; ++r) {
      const Index sr = t.mul(s, r);
      for (Index m = 0; m < nm; ++m) {
        const Index expect = left ? mod.act(s, mod.act(r, m)) : mod.act(r, mod.act(s, m));
        if (mod.act(sr, m) != expect) rep.add("action associativity", {s, r, m});
      }
    }
  }
  const double dt = nt, dm = nm;
  if (dt * dm * dm * dm <= kLiteralScanLimit) {
    for (Index s = 0; s < nt; ++s) {
      for (Index a = 0; a < nm; ++a) {
        for (Index b = 0; b < nm; ++b) {
          for (Index c = 0; c < nm; ++c) {
            if (mod.act(s, h.bracket(a, b, c)) != h.bracket(mod.act(s, a), mod.act(s, b), mod.act(s, c))) {
              rep.add("distributivity over the module bracket", {s, a, b, c});
            }
          }
        }
      }
    }
  } else {
    rep.reduced_checks.push_back("distributivity over the module bracket via retract");
    const Index e = h.base();
    for (Index s = 0; s < nt; ++s) {
      const Index se = mod.act(s, e);
      for (Index a = 0; a < nm; ++a) {
        for (Index b = 0; b < nm; ++b) {
          if (mod.act(s, h.add(a, b)) != h.bracket(mod.act(s, a), se, mod.act(s, b))) {
            rep.add("distributivity over the module bracket", {s, a, e, b});
          }
        }
      }
    }
  }
  const auto& th = t.heap();
  if (dt * dt * dt * dm <= kLiteralScanLimit) {
    for (Index a = 0; a < nt; ++a) {
      for (Index b = 0; b < nt; ++b) {
        for (Index c = 0; c < nt; ++c) {
          const Index abc = th.bracket(a, b, c);
          for (Index m = 0; m < nm; ++m) {
            if (mod.act(abc, m) != h.bracket(mod.act(a, m), mod.act(b, m), mod.act(c, m))) {
              rep.add("distributivity over the truss bracket", {a, b, c, m});
            }
          }
        }
      }
    }
  } else if (nt > 0) {
    rep.reduced_checks.push_back("distributivity over the truss bracket via retract");
    const Index e = th.base();
    for (Index m = 0; m < nm; ++m) {
      const Index em = mod.act(e, m);
      for (Index a = 0; a < nt; ++a) {
        for (Index b = 0; b < nt; ++b) {
          if (mod.act(th.add(a, b), m) != h.bracket(mod.act(a, m), em, mod.act(b, m))) {
            rep.add("distributivity over the truss bracket", {a, e, b, m});
          }
        }
      }
    }
  }
  if (unital) {
    if (!t.unit()) {
      rep.add("unit", {});
    } else {
      for (Index m = 0; m < nm; ++m) {
        if (mod.act(*t.unit(), m) != m) rep.add("unit", {*t.unit(), m});
      }
    }
  }
  return rep;
}

ModulePtr regular_module(const TrussPtr& t, Side side) {
  const std::size_t n = t->size();
  std::vector<Index> act(n * n);
  for (Index a = 0; a < n; ++a) {
    for (Index m = 0; m < n; ++m) act[a * n + m] = side == Side::Left ? t->mul(a, m) : t->mul(m, a);
  }
  return make_module(FiniteModule(t, t->heap_ptr(), std::move(act), side));
}

ModulePtr trivial_module(const TrussPtr& t, const HeapPtr& h, Side side) {
  std::vector<Index> act(t->size() * h->size());
  for (std::size_t a = 0; a < t->size(); ++a) {
    for (Index m = 0; m < h->size(); ++m) act[a * h->size() + m] = m;
  }
  return make_module(FiniteModule(t, h, std::move(act), side));
}

ModulePtr empty_module(const TrussPtr& t, Side side) { return make_module(FiniteModule(t, empty_heap(), {}, side)); }

std::vector<Index> absorbers(const FiniteModule& m) {
  std::vector<Index> out;
  for (Index x = 0; x < m.size(); ++x) {
    bool ok = true;
    for (Index t = 0; t < m.truss().size() && ok; ++t) ok = m.act(t, x) == x;
    if (ok) out.push_back(x);
  }
  return out;
}

ModulePtr induced_module(const ModulePtr& mp, Index e) {
  const auto& m = *mp;
  if (e >= m.size()) throw DomainError("induced base outside the carrier");
  std::vector<Index> act(m.action_table().size());
  for (Index t = 0; t < m.truss().size(); ++t) {
    const Index te = m.act(t, e);
    for (Index x = 0; x < m.size(); ++x) act[t * m.size() + x] = m.heap().bracket(m.act(t, x), te, e);
  }
  return make_module(FiniteModule(m.truss_ptr(), m.heap_ptr(), std::move(act), m.side()));
}

bool is_linear(const FiniteModule& m, const FiniteModule& n, const std::vector<Index>& map) {
  if (!is_heap_morphism(m.heap(), n.heap(), map)) return false;
  for (Index t = 0; t < m.truss().size(); ++t) {
    for (Index x = 0; x < m.size(); ++x) {
      if (map[m.act(t, x)] != n.act(t, map[x])) return false;
    }
  }
  return true;
}

namespace {

bool linear_given_heap_morphism(const FiniteModule& m, const FiniteModule& n, const std::vector<Index>& f) {
  for (Index t = 0; t < m.truss().size(); ++t) {
    for (Index x = 0; x < m.size(); ++x) {
      if (f[m.act(t, x)] != n.act(t, f[x])) return false;
    }
  }
  return true;
}

}  // namespace

void for_each_linear_map(const FiniteModule& m, const FiniteModule& n,
                         const std::function<bool(const std::vector<Index>&)>& visit) {
  for_each_heap_morphism_while(m.heap(), n.heap(), [&](const std::vector<Index>& f) {
    if (!linear_given_heap_morphism(m, n, f)) return true;
    return visit(f);
  });
}

std::vector<std::vector<Index>> hom_modules(const FiniteModule& m, const FiniteModule& n) {
  std::vector<std::vector<Index>> out;
  for_each_linear_map(m, n, [&](const std::vector<Index>& f) {
    out.push_back(f);
    return true;
  });
  return out;
}

std::size_t count_linear_maps(const FiniteModule& m, const FiniteModule& n) {
  std::size_t c = 0;
  for_each_linear_map(m, n, [&](const std::vector<Index>&) {
    ++c;
    return true;
  });
  return c;
}

EndomorphismTruss linear_endomorphism_truss(const FiniteModule& m) {
  EndomorphismTruss out;
  out.maps = hom_modules(m, m);
  const auto& h = m.heap();
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
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      for (Index x = 0; x < h.size(); ++x) f[x] = h.bracket(out.maps[i][x], out.maps[0][x], out.maps[j][x]);
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

std::optional<std::vector<Index>> find_module_isomorphism(const FiniteModule& m, const FiniteModule& n) {
  if (m.size() != n.size()) return std::nullopt;
  std::optional<std::vector<Index>> found;
  for_each_linear_map(m, n, [&](const std::vector<Index>& f) {
    std::vector<char> hit(n.size(), 0);
    for (Index v : f) {
      if (hit[v]) return true;
      hit[v] = 1;
    }
    found = f;
    return false;
  });
  return found;
}

bool is_submodule(const FiniteModule& m, const SubHeap& s) {
  if (!is_closed(m.heap(), s)) return false;
  for (Index t = 0; t < m.truss().size(); ++t) {
    for (Index x : s.members) {
      if (!s.contains(m.act(t, x))) return false;
    }
  }
  return true;
}

bool is_induced_submodule(const FiniteModule& m, const SubHeap& s, Index e) {
  if (!is_closed(m.heap(), s)) return false;
  for (Index t = 0; t < m.truss().size(); ++t) {
    const Index te = m.act(t, e);
    for (Index x : s.members) {
      if (!s.contains(m.heap().bracket(m.act(t, x), te, e))) return false;
    }
  }
  return true;
}

SubmoduleResult submodule(const ModulePtr& mp, const std::vector<Index>& members_in) {
  const auto& m = *mp;
  SubHeap s = make_subheap(m.heap(), members_in);
  if (!is_submodule(m, s)) throw DomainError("subset is not closed under bracket and action");
  const auto& mem = s.members;
  const std::size_t k = mem.size();
  std::vector<Index> pos(m.size(), 0);
  for (std::size_t i = 0; i < k; ++i) pos[mem[i]] = static_cast<Index>(i);
  std::vector<std::string> labels(k);
  std::vector<Index> add(k * k), act(m.truss().size() * k);
  for (std::size_t i = 0; i < k; ++i) {
    labels[i] = m.heap().label(mem[i]);
    for (std::size_t j = 0; j < k; ++j) add[i * k + j] = pos[m.heap().bracket(mem[i], mem[0], mem[j])];
  }
  for (Index t = 0; t < m.truss().size(); ++t) {
    for (std::size_t i = 0; i < k; ++i) act[t * k + i] = pos[m.act(t, mem[i])];
  }
  HeapPtr h = make_heap(FiniteAbelianHeap(std::move(labels), 0, std::move(add)));
  ModulePtr sub = make_module(FiniteModule(m.truss_ptr(), h, std::move(act), m.side()));
  return SubmoduleResult{sub, ModuleMorphism{sub, mp, mem}};
}

QuotientModule quotient_module(const ModulePtr& mp, const SubHeap& n, Index e) {
  const auto& m = *mp;
  if (n.empty()) throw DomainError("quotient by the empty sub-heap");
  if (!n.contains(e)) throw DomainError("the quotient base must lie in the sub-heap");
  if (!is_induced_submodule(m, n, e)) throw DomainError("sub-heap is not closed under the induced action");
  HeapQuotient q = quotient_heap(m.heap_ptr(), n);
  const std::size_t k = q.classes.size();
  std::vector<Index> act(m.truss().size() * k);
  for (Index t = 0; t < m.truss().size(); ++t) {
    for (std::size_t c = 0; c < k; ++c) {
      const Index v = q.projection(m.act(t, q.classes[c].front()));
      for (Index x : q.classes[c]) {
        if (q.projection(m.act(t, x)) != v) throw Error("quotient action is not well defined");
      }
      act[t * k + c] = v;
    }
  }
  ModulePtr out = make_module(FiniteModule(m.truss_ptr(), q.heap, std::move(act), m.side()));
  return QuotientModule{out, ModuleMorphism{mp, out, q.projection.map}, std::move(q.classes), e};
}

QuotientModule coequalizer(const ModuleMorphism& phi, const ModuleMorphism& psi, Index e) {
  const ModulePtr& b = phi.codomain;
  const auto& bm = *b;
  if (phi.map.size() != psi.map.size()) throw DomainError("coequalizer of maps with different domains");
  if (bm.size() == 0) {
    return QuotientModule{b, ModuleMorphism{b, b, {}}, {}, 0};
  }
  if (e >= bm.size()) throw DomainError("coequalizer base outside the codomain");
  std::vector<Index> seed{e};
  for (std::size_t a = 0; a < phi.map.size(); ++a) seed.push_back(bm.heap().bracket(phi.map[a], psi.map[a], e));
  SubHeap s = generate_subheap(bm.heap(), seed);
  for (;;) {
    std::vector<Index> grown = s.members;
    for (Index t = 0; t < bm.truss().size(); ++t) {
      const Index te = bm.act(t, e);
      for (Index x : s.members) grown.push_back(bm.heap().bracket(bm.act(t, x), te, e));
    }
    SubHeap next = generate_subheap(bm.heap(), grown);
    if (next == s) break;
    s = std::move(next);
  }
  return quotient_module(b, s, e);
}

SubmoduleResult equalizer(const ModuleMorphism& phi, const ModuleMorphism& psi) {
  std::vector<Index> members;
  for (Index a = 0; a < phi.map.size(); ++a) {
    if (phi.map[a] == psi.map[a]) members.push_back(a);
  }
  return submodule(phi.domain, members);
}

bool is_epi(const ModuleMorphism& f) { return image_of(f.map).size() == f.codomain->size(); }
bool is_mono(const ModuleMorphism& f) { return image_of(f.map).size() == f.map.size(); }

ProductModule product(const ModulePtr& mp, const ModulePtr& np) {
  const auto& m = *mp;
  const auto& n = *np;
  if (m.side() != n.side()) throw DomainError("product of modules on different sides");
  if (m.truss_ptr() != n.truss_ptr() && !(m.truss() == n.truss())) throw DomainError("product over different trusses");
  HeapPtr h = product_heap(m.heap(), n.heap());
  const std::size_t k = h->size();
  std::vector<Index> act(m.truss().size() * k);
  for (Index t = 0; t < m.truss().size(); ++t) {
    for (Index a = 0; a < m.size(); ++a) {
      for (Index b = 0; b < n.size(); ++b) {
        act[t * k + a * n.size() + b] = static_cast<Index>(m.act(t, a) * n.size() + n.act(t, b));
      }
    }
  }
  ModulePtr out = make_module(FiniteModule(m.truss_ptr(), h, std::move(act), m.side()));
  std::vector<Index> p1(k), p2(k);
  for (std::size_t x = 0; x < k; ++x) {
    p1[x] = static_cast<Index>(x / n.size());
    p2[x] = static_cast<Index>(x % n.size());
  }
  return ProductModule{out, ModuleMorphism{out, mp, p1}, ModuleMorphism{out, np, p2}};
}

ModulePtr power(const ModulePtr& m, std::size_t k) {
  if (k == 0) return trivial_module(m->truss_ptr(), star_heap(), m->side());
  ModulePtr acc = m;
  for (std::size_t i = 1; i < k; ++i) acc = product(acc, m).module;
  return acc;
}

SubHeap generated_submodule(const FiniteModule& m, const std::vector<Index>& seed) {
  if (seed.empty()) return SubHeap{m.size(), {}};
  SubHeap s = generate_subheap(m.heap(), seed);
  for (;;) {
    std::vector<Index> grown = s.members;
    for (Index t = 0; t < m.truss().size(); ++t) {
      for (Index x : s.members) grown.push_back(m.act(t, x));
    }
    SubHeap next = generate_subheap(m.heap(), grown);
    if (next == s) return s;
    s = std::move(next);
  }
}

// ---------------------------------------------------------------------------
// Lazy modules

namespace {

std::vector<HeapPtr> heaps_of(const std::vector<ModulePtr>& ms) {
  if (ms.empty()) throw DomainError("coproduct needs at least one summand");
  std::vector<HeapPtr> out;
  for (const auto& m : ms) out.push_back(m->heap_ptr());
  return out;
}

}  // namespace

CoproductModule::CoproductModule(std::vector<ModulePtr> summands)
    : summands_(std::move(summands)), cop_(heaps_of(summands_)) {
  for (const auto& m : summands_) {
    if (m->side() != summands_.front()->side()) throw DomainError("coproduct of modules on different sides");
  }
}

CoproductElement CoproductModule::act(Index t, const CoproductElement& x) const {
  return cop_.map_letters(x, [&](const Letter& l) { return Letter{l.summand, summands_[l.summand]->act(t, l.element)}; });
}

namespace {

std::vector<HeapPtr> free_summands(const TrussPtr& t, std::size_t rank) {
  if (rank == 0) throw DomainError("a free module on no generators is the empty module");
  if (t->heap().empty()) throw DomainError("free modules over the empty truss are not represented");
  std::vector<HeapPtr> out;
  for (std::size_t i = 0; i < rank; ++i) {
    out.push_back(t->heap_ptr());
    out.push_back(star_heap());
  }
  return out;
}

}  // namespace

FreeModule::FreeModule(TrussPtr t, std::vector<std::string> generators)
    : truss_(std::move(t)), generators_(std::move(generators)), cop_(free_summands(truss_, generators_.size())) {}

CoproductElement FreeModule::act(Index t, const CoproductElement& x) const {
  return cop_.map_letters(x, [&](const Letter& l) {
    if (l.summand % 2 == 1) return Letter{l.summand - 1, t};
    return Letter{l.summand, truss_->mul(t, l.element)};
  });
}

Index FreeModule::extend(const FiniteModule& target, const std::vector<Index>& images, const CoproductElement& x) const {
  if (images.size() != rank()) throw DomainError("one image per generator");
  const AlternatingWord w = cop_.unfold(x);
  SparseRow terms;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Index img = images[w[i].summand / 2];
    const Index v = w[i].summand % 2 == 1 ? img : target.act(w[i].element, img);
    terms.emplace_back(v, i % 2 == 0 ? 1 : -1);
  }
  return target.heap().affine_sum(terms);
}

PlusModule unitalize(const ModulePtr& m, const UnitalPtr& ext) {
  PlusModule p;
  p.ext = ext;
  p.heap = m->heap_ptr();
  p.act = [m, ext](const CoproductElement& z, Index x) {
    const AlternatingWord w = ext->coproduct().unfold(z);
    SparseRow terms;
    for (std::size_t i = 0; i < w.size(); ++i) {
      terms.emplace_back(w[i].summand == 1 ? x : m->act(w[i].element, x), i % 2 == 0 ? 1 : -1);
    }
    return m->heap().affine_sum(terms);
  };
  return p;
}

ModulePtr restrict_to_base(const PlusModule& p, const TrussPtr& t) {
  const std::size_t n = p.heap->size();
  std::vector<Index> act(t->size() * n);
  for (Index a = 0; a < t->size(); ++a) {
    const CoproductElement z = p.ext->embed(a);
    for (Index x = 0; x < n; ++x) act[a * n + x] = p.act(z, x);
  }
  return make_module(FiniteModule(t, p.heap, std::move(act)));
}

ModulePtr restrict_scalars(const TrussPtr& t, const std::vector<Index>& f, const ModulePtr& n) {
  if (!is_truss_morphism(*t, n->truss(), f)) throw DomainError("restriction along a map that is not a truss morphism");
  const std::size_t k = n->size();
  std::vector<Index> act(t->size() * k);
  for (Index a = 0; a < t->size(); ++a) {
    for (Index x = 0; x < k; ++x) act[a * k + x] = n->act(f[a], x);
  }
  return make_module(FiniteModule(t, n->heap_ptr(), std::move(act), n->side()));
}

// ---------------------------------------------------------------------------
// Fixture families

std::vector<HeapPtr> canonical_heaps(std::size_t max_size) {
  std::vector<HeapPtr> all{empty_heap(), star_heap(), cyclic_heap(2), cyclic_heap(3), cyclic_heap(4),
                           abelian_group_heap({2, 2})};
  std::vector<HeapPtr> out;
  for (auto& h : all) {
    if (h->size() <= max_size) out.push_back(h);
  }
  return out;
}

namespace {

std::vector<std::vector<Index>> heap_automorphisms(const FiniteAbelianHeap& h) {
  std::vector<std::vector<Index>> out;
  for_each_heap_morphism(h, h, [&](const std::vector<Index>& f) {
    if (image_of(f).size() == h.size()) out.push_back(f);
  });
  return out;
}

std::vector<Index> canonical_action_with(const FiniteModule& m, const std::vector<std::vector<Index>>& autos) {
  const std::size_t n = m.size();
  std::vector<Index> best = m.action_table(), cur(best.size());
  for (const auto& s : autos) {
    for (Index t = 0; t < m.truss().size(); ++t) {
      for (Index x = 0; x < n; ++x) cur[t * n + s[x]] = s[m.act(t, x)];
    }
    if (cur < best) best = cur;
  }
  return best;
}

}  // namespace

std::vector<Index> canonical_action(const FiniteModule& m) { return canonical_action_with(m, heap_automorphisms(m.heap())); }

std::vector<ModulePtr> module_family(const TrussPtr& t, std::size_t max_size, bool unital_only) {
  std::vector<ModulePtr> out;
  for (const auto& h : canonical_heaps(max_size)) {
    if (h->empty()) {
      if (!unital_only || t->is_unital()) out.push_back(empty_module(t));
      continue;
    }
    const EndomorphismTruss e = endomorphism_truss(h);
    const auto autos = heap_automorphisms(*h);
    std::set<std::vector<Index>> seen;
    std::optional<Index> identity;
    {
      std::vector<Index> id(h->size());
      for (Index x = 0; x < h->size(); ++x) id[x] = x;
      identity = e.index_of(id);
    }
    for (const auto& f : enumerate_truss_morphisms(*t, *e.truss)) {
      if (unital_only && (!t->unit() || f[*t->unit()] != *identity)) continue;
      std::vector<Index> act(t->size() * h->size());
      for (Index a = 0; a < t->size(); ++a) {
        for (Index x = 0; x < h->size(); ++x) act[a * h->size() + x] = e.maps[f[a]][x];
      }
      FiniteModule m(t, h, std::move(act));
      if (seen.insert(canonical_action_with(m, autos)).second) out.push_back(make_module(std::move(m)));
    }
  }
  return out;
}

}  // namespace trusskit
