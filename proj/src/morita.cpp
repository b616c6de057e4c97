#include "trusskit/morita.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace trusskit {

namespace {

using Map = std::vector<Index>;

struct MapHeap {
  HeapPtr heap;
  std::map<Map, Index> index;
};

// Pointwise heap on a list of maps into `target`, based at maps[0].
MapHeap pointwise_heap(const std::vector<Map>& maps, const FiniteAbelianHeap& target, const std::string& prefix) {
  MapHeap out;
  const std::size_t k = maps.size();
  if (k == 0) {
    out.heap = empty_heap();
    return out;
  }
  for (std::size_t i = 0; i < k; ++i) out.index.emplace(maps[i], static_cast<Index>(i));
  const std::size_t dom = maps[0].size();
  std::vector<Index> add(k * k);
  Map g(dom);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      for (std::size_t x = 0; x < dom; ++x) g[x] = target.bracket(maps[i][x], maps[0][x], maps[j][x]);
      add[i * k + j] = out.index.at(g);
    }
  }
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < k; ++i) labels.push_back(prefix + std::to_string(i));
  out.heap = make_heap(FiniteAbelianHeap(std::move(labels), 0, std::move(add)));
  return out;
}

// Odometer with the first coordinate most significant.
bool next_tuple(std::vector<std::size_t>& t, std::size_t radix) {
  for (std::size_t i = t.size(); i-- > 0;) {
    if (++t[i] < radix) return true;
    t[i] = 0;
  }
  return false;
}

SparseRow alternating(const std::vector<Index>& xs) {
  SparseRow row;
  for (std::size_t i = 0; i < xs.size(); ++i) row.emplace_back(xs[i], i % 2 == 0 ? 1 : -1);
  return row;
}

// Class of a sum-one row over generator pairs.
Index class_of_row(const TensorProduct& tp, const SparseRow& row) {
  SparseRow simple;
  const Index gn = static_cast<Index>(tp.right_generators());
  for (const auto& [p, c] : row) simple.emplace_back(tp.simple(p / gn, p % gn), c);
  return tp.heap()->affine_sum(simple);
}

bool same_truss(const FiniteModule& a, const FiniteModule& b) {
  return a.truss_ptr() == b.truss_ptr() || a.truss() == b.truss();
}

std::optional<Map> find_linear(const FiniteModule& m, const FiniteModule& n, const std::function<bool(const Map&)>& pred) {
  std::optional<Map> hit;
  for_each_linear_map(m, n, [&](const Map& f) {
    if (!pred(f)) return true;
    hit = f;
    return false;
  });
  return hit;
}

Map compose(const Map& g, const Map& f) {
  Map out(f.size());
  for (std::size_t x = 0; x < f.size(); ++x) out[x] = g[f[x]];
  return out;
}

bool is_bijection(const Map& f, std::size_t codomain) {
  if (f.size() != codomain) return false;
  std::vector<bool> seen(codomain, false);
  for (Index v : f) {
    if (v >= codomain || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

// Commuting left and right actions on one heap.
void bimodule_check(ValidationReport& r, const std::string& what, const FiniteModule& left, const FiniteModule& right) {
  r.merge(validate_module(left, left.truss().is_unital()));
  r.merge(validate_module(right, right.truss().is_unital()));
  if (!(left.heap() == right.heap())) {
    r.add(what + " sides on different heaps", {});
    return;
  }
  for (Index s = 0; s < left.truss().size(); ++s) {
    for (Index t = 0; t < right.truss().size(); ++t) {
      for (Index x = 0; x < left.size(); ++x) {
        if (left.act(s, right.act(t, x)) != right.act(t, left.act(s, x))) r.add(what + " actions commute", {s, t, x});
      }
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Dual bases

DbpResult check_dual_basis(const ModulePtr& p, const DualBasis& basis, const UnitalPtr& ext_in) {
  DbpResult out;
  const std::size_t s = basis.size();
  if (s == 0 || s % 2 == 0) return out;
  if (basis.unital ? basis.plus_covectors.size() != s : basis.covectors.size() != s) return out;
  const auto& m = *p;
  std::vector<Index> terms(s);
  if (!basis.unital) {
    for (Index x = 0; x < m.size(); ++x) {
      for (std::size_t k = 0; k < s; ++k) terms[k] = m.act(basis.covectors[k][x], basis.elements[k]);
      if (m.heap().multi_bracket(terms) != x) {
        out.counterexample = x;
        return out;
      }
    }
  } else {
    const UnitalPtr ext = ext_in ? ext_in : std::make_shared<UnitalExtension>(m.truss_ptr());
    const PlusModule um = unitalize(p, ext);
    for (Index x = 0; x < m.size(); ++x) {
      for (std::size_t k = 0; k < s; ++k) terms[k] = um.act(basis.plus_covectors[k][x], basis.elements[k]);
      if (m.heap().multi_bracket(terms) != x) {
        out.counterexample = x;
        return out;
      }
    }
  }
  out.holds = true;
  return out;
}

namespace {

// Shared search: `value(k, c, x)` is φ_c(x)·e for the element e at slot k.
template <typename ActOnElement>
std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> search_tuples(
    const FiniteModule& m, std::size_t covectors, std::size_t s_max, std::size_t limit, ActOnElement act) {
  std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> hits;
  if (m.size() == 0 || covectors == 0 || limit == 0) return hits;
  std::vector<Index> terms;
  for (std::size_t s = 1; s <= s_max; s += 2) {
    std::vector<std::size_t> el(s, 0);
    terms.assign(s, 0);
    do {
      std::vector<std::size_t> cv(s, 0);
      do {
        bool ok = true;
        for (Index x = 0; x < m.size() && ok; ++x) {
          for (std::size_t k = 0; k < s; ++k) terms[k] = act(cv[k], x, static_cast<Index>(el[k]));
          ok = m.heap().multi_bracket(terms) == x;
        }
        if (ok) {
          hits.emplace_back(el, cv);
          if (hits.size() >= limit) return hits;
        }
      } while (next_tuple(cv, covectors));
    } while (next_tuple(el, m.size()));
  }
  return hits;
}

}  // namespace

std::vector<DualBasis> dual_bases(const ModulePtr& p, std::size_t s_max, std::size_t limit) {
  const auto& m = *p;
  const auto homs = hom_modules(m, *regular_module(m.truss_ptr()));
  const auto hits = search_tuples(m, homs.size(), s_max, limit,
                                  [&](std::size_t c, Index x, Index e) { return m.act(homs[c][x], e); });
  std::vector<DualBasis> out;
  for (const auto& [el, cv] : hits) {
    DualBasis b;
    for (auto e : el) b.elements.push_back(static_cast<Index>(e));
    for (auto c : cv) b.covectors.push_back(homs[c]);
    out.push_back(std::move(b));
  }
  return out;
}

std::optional<DualBasis> search_dual_basis(const ModulePtr& p, std::size_t s_max) {
  auto all = dual_bases(p, s_max, 1);
  if (all.empty()) return std::nullopt;
  return all.front();
}

std::optional<Index> DualModule::index_of(const std::vector<CoproductElement>& f) const {
  const auto it = std::find(maps.begin(), maps.end(), f);
  if (it == maps.end()) return std::nullopt;
  return static_cast<Index>(it - maps.begin());
}

DualModule dual_module(const ModulePtr& p, std::int64_t bound) {
  const auto& m = *p;
  const TrussPtr& t = m.truss_ptr();
  if (t->size() == 0) throw DomainError("dual module over the empty truss");
  DualModule out;
  out.ext = std::make_shared<UnitalExtension>(t);
  const auto& ext = *out.ext;
  if (bound < 0) bound = static_cast<std::int64_t>(m.size());
  // A heap morphism out of a finite heap into T ⊞ ⋆ has a torsion image, so
  // it lands in one tail level z and is a heap morphism into that level.
  for (std::int64_t z = -bound; z <= bound; ++z) {
    for_each_heap_morphism(m.heap(), t->heap(), [&](const Map& f) {
      std::vector<CoproductElement> g(m.size());
      for (Index x = 0; x < m.size(); ++x) {
        g[x] = ext.embed(f[x]);
        g[x].tails[0] = z;
      }
      for (Index a = 0; a < t->size(); ++a) {
        const CoproductElement ta = ext.embed(a);
        for (Index x = 0; x < m.size(); ++x) {
          if (g[m.act(a, x)] != ext.multiply(ta, g[x])) return;
        }
      }
      out.maps.push_back(std::move(g));
    });
  }
  if (m.size() == 0) out.maps.assign(1, {});
  const std::size_t k = out.maps.size();
  std::map<std::vector<CoproductElement>, Index> index;
  for (std::size_t i = 0; i < k; ++i) index.emplace(out.maps[i], static_cast<Index>(i));
  std::vector<Index> add(k * k), act(t->size() * k);
  std::vector<CoproductElement> g(m.size());
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      for (Index x = 0; x < m.size(); ++x) g[x] = ext.bracket(out.maps[i][x], out.maps[0][x], out.maps[j][x]);
      add[i * k + j] = index.at(g);
    }
  }
  for (Index a = 0; a < t->size(); ++a) {
    const CoproductElement ta = ext.embed(a);
    for (std::size_t i = 0; i < k; ++i) {
      for (Index x = 0; x < m.size(); ++x) g[x] = ext.multiply(out.maps[i][x], ta);
      const auto it = index.find(g);
      if (it == index.end()) throw Error("dual module is not closed under the right action");
      act[a * k + i] = it->second;
    }
  }
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < k; ++i) labels.push_back("f" + std::to_string(i));
  out.module = make_module(FiniteModule(t, make_heap(FiniteAbelianHeap(std::move(labels), 0, std::move(add))),
                                        std::move(act), Side::Right));
  return out;
}

std::optional<DualBasis> search_unital_dual_basis(const ModulePtr& p, const DualModule& dual, std::size_t s_max) {
  const auto& m = *p;
  if (m.size() == 0) return std::nullopt;
  const PlusModule um = unitalize(p, dual.ext);
  const auto hits = search_tuples(m, dual.maps.size(), s_max, 1,
                                  [&](std::size_t c, Index x, Index e) { return um.act(dual.maps[c][x], e); });
  if (hits.empty()) return std::nullopt;
  DualBasis b;
  b.unital = true;
  for (auto e : hits.front().first) b.elements.push_back(static_cast<Index>(e));
  for (auto c : hits.front().second) b.plus_covectors.push_back(dual.maps[c]);
  return b;
}

namespace {

std::vector<CoproductElement> plus_covector(const DualModule& dual, const DualBasis& b, std::size_t k) {
  if (b.unital) return b.plus_covectors[k];
  std::vector<CoproductElement> out;
  for (Index v : b.covectors[k]) out.push_back(dual.ext->embed(v));
  return out;
}

}  // namespace

bool dual_inherits_basis(const ModulePtr& p, const DualModule& dual, const DualBasis& basis) {
  const auto& ext = *dual.ext;
  const std::size_t s = basis.size();
  std::vector<std::vector<CoproductElement>> phi;
  for (std::size_t k = 0; k < s; ++k) phi.push_back(plus_covector(dual, basis, k));
  for (const auto& alpha : dual.maps) {
    for (Index x = 0; x < p->size(); ++x) {
      CoproductElement acc = ext.multiply(phi[0][x], alpha[basis.elements[0]]);
      for (std::size_t k = 1; k + 1 < s; k += 2) {
        acc = ext.bracket(acc, ext.multiply(phi[k][x], alpha[basis.elements[k]]),
                          ext.multiply(phi[k + 1][x], alpha[basis.elements[k + 1]]));
      }
      if (acc != alpha[x]) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Tiny modules

Index dual_basis_class(const ModulePtr&, const DualModule& dual, const TensorProduct& dp, const DualBasis& basis) {
  std::vector<Index> pairs;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const auto idx = dual.index_of(plus_covector(dual, basis, k));
    if (!idx) throw DomainError("covector is not an element of the dual module");
    pairs.push_back(dp.pair_index(*idx, basis.elements[k]));
  }
  return class_of_row(dp, alternating(pairs));
}

TinyReport tiny_check(const ModulePtr& p, const DualBasis& basis, const std::vector<ModulePtr>& test_modules) {
  TinyReport out;
  auto& r = out.report;
  if (!check_dual_basis(p, basis).holds) throw DomainError("tiny_check needs a dual basis of the module");
  const DualModule dual = dual_module(p);
  const std::size_t np = p->size();
  std::vector<Index> phi;
  for (std::size_t k = 0; k < basis.size(); ++k) phi.push_back(*dual.index_of(plus_covector(dual, basis, k)));

  struct Side_ {
    ModulePtr m;
    TensorPtr tp;
    std::vector<Map> homs;
    MapHeap mh;
    std::vector<Index> tau;
  };
  std::vector<Side_> sides;
  for (std::size_t mi = 0; mi < test_modules.size(); ++mi) {
    const ModulePtr& m = test_modules[mi];
    if (m->size() == 0 || !same_truss(*m, *p)) continue;
    Side_ sd;
    sd.m = m;
    sd.tp = tensor(dual.module, m);
    sd.homs = hom_modules(*p, *m);
    sd.mh = pointwise_heap(sd.homs, m->heap(), "h");
    const PlusModule um = unitalize(m, dual.ext);
    bool closed = true;
    const auto tau_f = [&](Index a, Index y) -> Index {
      Map g(np);
      for (Index x = 0; x < np; ++x) g[x] = um.act(dual.maps[a][x], y);
      const auto it = sd.mh.index.find(g);
      if (it == sd.mh.index.end()) {
        closed = false;
        return 0;
      }
      return it->second;
    };
    if (!sd.tp->vanishes_on_relators(tau_f, *sd.mh.heap) || !closed) {
      r.add("tau is balanced", {static_cast<Index>(mi)});
      continue;
    }
    sd.tau = sd.tp->induce(tau_f, *sd.mh.heap);
    if (sd.tp->size() != sd.homs.size()) r.add("tau bijective", {static_cast<Index>(mi)});
    // σ(f) = [φ_k ⊗ f(e_k)].
    std::vector<Index> sigma(sd.homs.size());
    for (std::size_t f = 0; f < sd.homs.size(); ++f) {
      std::vector<Index> pairs;
      for (std::size_t k = 0; k < phi.size(); ++k) pairs.push_back(sd.tp->pair_index(phi[k], sd.homs[f][basis.elements[k]]));
      sigma[f] = class_of_row(*sd.tp, alternating(pairs));
      if (sd.tau[sigma[f]] != f) r.add("tau after sigma", {static_cast<Index>(mi), static_cast<Index>(f)});
    }
    for (Index c = 0; c < sd.tau.size(); ++c) {
      if (sigma[sd.tau[c]] != c) r.add("sigma after tau", {static_cast<Index>(mi), c});
    }
    ++out.modules;
    sides.push_back(std::move(sd));
  }

  // τ_N(α ⊗ g(m)) = g ∘ τ_M(α ⊗ m).
  for (std::size_t i = 0; i < sides.size(); ++i) {
    for (std::size_t j = 0; j < sides.size(); ++j) {
      const auto& a = sides[i];
      const auto& b = sides[j];
      std::optional<Map> g = find_linear(*a.m, *b.m, [](const Map& f) { return image_of(f).size() > 1; });
      if (!g) g = find_linear(*a.m, *b.m, [](const Map&) { return true; });
      if (!g) continue;
      for (Index al = 0; al < dual.maps.size(); ++al) {
        for (Index y = 0; y < a.m->size(); ++y) {
          const Map& lhs = b.homs[b.tau[b.tp->simple(al, (*g)[y])]];
          if (lhs != compose(*g, a.homs[a.tau[a.tp->simple(al, y)]])) {
            r.add("tau natural", {static_cast<Index>(i), static_cast<Index>(j), al, y});
          }
        }
      }
      ++out.naturality;
    }
  }

  // Zigzags through db = [φ_k ⊗ e_k] ∈ ⁎P ⊗_T P.
  const auto dp = tensor(dual.module, p);
  out.db_class = dual_basis_class(p, dual, *dp, basis);
  const PlusModule up = unitalize(p, dual.ext);
  for (Index x = 0; x < np; ++x) {
    const auto f = [&](Index b, Index q) { return up.act(dual.maps[b][x], q); };
    if (!dp->vanishes_on_relators(f, p->heap())) {
      r.add("ev zigzag is balanced", {x});
      continue;
    }
    if (dp->induce(f, p->heap())[out.db_class] != x) r.add("(ev ⊗ P)(P ⊗ db) = id", {x});
  }
  const auto& dh = dual.module->heap();
  for (Index al = 0; al < dual.maps.size(); ++al) {
    bool closed = true;
    const auto f = [&](Index b, Index q) -> Index {
      std::vector<CoproductElement> g(np);
      for (Index y = 0; y < np; ++y) g[y] = dual.ext->multiply(dual.maps[b][y], dual.maps[al][q]);
      const auto idx = dual.index_of(g);
      if (!idx) {
        closed = false;
        return 0;
      }
      return *idx;
    };
    if (!dp->vanishes_on_relators(f, dh) || !closed) {
      r.add("db zigzag is balanced", {al});
      continue;
    }
    if (dp->induce(f, dh)[out.db_class] != al) r.add("(⁎P ⊗ ev)(db ⊗ ⁎P) = id", {al});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Morita contexts

MoritaReport morita_check(const MoritaContext& ctx) {
  MoritaReport out;
  auto& r = out.report;
  if (!ctx.s->is_unital() || !ctx.t->is_unital()) throw DomainError("Morita contexts need unital trusses");
  const auto& s = *ctx.s;
  const auto& t = *ctx.t;
  const auto& pl = *ctx.p_left;
  const auto& pr = *ctx.p_right;
  const auto& ql = *ctx.q_left;
  const auto& qr = *ctx.q_right;
  if (pl.side() != Side::Left || ql.side() != Side::Left || pr.side() != Side::Right || qr.side() != Side::Right) {
    throw DomainError("Morita context needs P, Q given as left and right modules");
  }
  bimodule_check(r, "P", pl, pr);
  bimodule_check(r, "Q", ql, qr);
  if (!r.ok()) return out;
  const Index np = static_cast<Index>(pl.size());
  const Index nq = static_cast<Index>(ql.size());

  const auto pq = tensor(ctx.p_right, ctx.q_left);
  const auto qp = tensor(ctx.q_right, ctx.p_left);
  out.pq_size = pq->size();
  out.qp_size = qp->size();
  out.pq_invariants = pq->invariants();
  out.qp_invariants = qp->invariants();
  out.relators_pq = pq->relator_count();
  out.relators_qp = qp->relator_count();

  // ev: P ⊗_T Q → S.
  const auto ev = [&](Index a, Index b) { return ctx.ev(a, b); };
  if (!pq->vanishes_on_relators(ev, s.heap())) {
    r.add("ev is T-balanced", {});
    return out;
  }
  const Map ev_t = pq->induce(ev, s.heap());
  if (!is_bijection(ev_t, s.size())) r.add("ev bijective", {static_cast<Index>(pq->size())});
  for (Index x = 0; x < s.size(); ++x) {
    for (Index a = 0; a < np; ++a) {
      for (Index b = 0; b < nq; ++b) {
        const Index v = ev(a, b);
        if (ev(pl.act(x, a), b) != s.mul(x, v)) r.add("ev left S-linear", {x, a, b});
        if (ev(a, qr.act(x, b)) != s.mul(v, x)) r.add("ev right S-linear", {x, a, b});
      }
    }
  }

  // db(t) = t·db(1) = db(1)·t in Q ⊗_S P.
  Map db(t.size());
  for (Index x = 0; x < t.size(); ++x) {
    SparseRow left, right;
    for (const auto& [pair, c] : ctx.db_unit) {
      const Index q = pair / np, p = pair % np;
      left.emplace_back(qp->pair_index(ql.act(x, q), p), c);
      right.emplace_back(qp->pair_index(q, pr.act(x, p)), c);
    }
    db[x] = class_of_row(*qp, left);
    if (class_of_row(*qp, right) != db[x]) r.add("db is T-bilinear", {x});
  }
  if (!is_bijection(db, qp->size())) r.add("db bijective", {static_cast<Index>(qp->size())});

  // (Q ⊗ ev)(db ⊗ Q) = id_Q.
  for (Index q = 0; q < nq; ++q) {
    const auto f = [&](Index q2, Index p2) { return qr.act(ev(p2, q), q2); };
    if (!qp->vanishes_on_relators(f, qr.heap())) {
      r.add("Q zigzag is S-balanced", {q});
      continue;
    }
    SparseRow terms;
    for (const auto& [pair, c] : ctx.db_unit) terms.emplace_back(f(pair / np, pair % np), c);
    if (qr.heap().affine_sum(terms) != q) r.add("(Q ⊗ ev)(db ⊗ Q) = id", {q});
  }
  // (ev ⊗ P)(P ⊗ db) = id_P.
  for (Index p = 0; p < np; ++p) {
    const auto f = [&](Index q2, Index p2) { return pl.act(ev(p, q2), p2); };
    if (!qp->vanishes_on_relators(f, pl.heap())) {
      r.add("P zigzag is S-balanced", {p});
      continue;
    }
    SparseRow terms;
    for (const auto& [pair, c] : ctx.db_unit) terms.emplace_back(f(pair / np, pair % np), c);
    if (pl.heap().affine_sum(terms) != p) r.add("(ev ⊗ P)(P ⊗ db) = id", {p});
  }

  if (ctx.ev_inverse) {
    for (Index x = 0; x < s.size(); ++x) {
      const Index c = class_of_row(*pq, ctx.ev_inverse(x));
      if (ev_t[c] != x) r.add("ev ∘ ev⁻¹ = id", {x});
    }
    for (Index c = 0; c < pq->size(); ++c) {
      if (class_of_row(*pq, ctx.ev_inverse(ev_t[c])) != c) r.add("ev⁻¹ ∘ ev = id", {c});
    }
  }
  if (ctx.db_inverse) {
    const auto f = [&](Index q, Index p) { return ctx.db_inverse(q, p); };
    if (!qp->vanishes_on_relators(f, t.heap())) {
      r.add("db⁻¹ is S-balanced", {});
    } else {
      const Map inv = qp->induce(f, t.heap());
      for (Index x = 0; x < t.size(); ++x) {
        if (inv[db[x]] != x) r.add("db⁻¹ ∘ db = id", {x});
      }
      for (Index c = 0; c < qp->size(); ++c) {
        if (db[inv[c]] != c) r.add("db ∘ db⁻¹ = id", {c});
      }
    }
  }
  return out;
}

MoritaContext matrix_morita_example(const TrussPtr& tp, std::size_t n, std::optional<Index> absorber) {
  const auto& t = *tp;
  if (!t.is_unital()) throw DomainError("the matrix Morita context needs a unital truss");
  if (!absorber) {
    const auto abs = two_sided_absorbers(t);
    if (abs.empty()) throw DomainError("the matrix Morita context needs a two-sided absorber");
    absorber = abs.front();
  } else {
    const auto abs = two_sided_absorbers(t);
    if (std::find(abs.begin(), abs.end(), *absorber) == abs.end()) throw DomainError("not a two-sided absorber");
  }
  const Index a = *absorber;
  const Index one = *t.unit();
  const auto& h = t.heap();
  TrussPtr sp = matrix_truss(t, n);
  const auto& s = *sp;
  const std::size_t q = t.size();

  const auto reg = regular_module(tp);
  const HeapPtr vec = power(reg, n)->heap_ptr();
  const std::size_t nv = vec->size();
  const auto digits = [q](std::size_t x, std::size_t len) {
    std::vector<Index> d(len);
    for (std::size_t k = len; k-- > 0;) {
      d[k] = static_cast<Index>(x % q);
      x /= q;
    }
    return d;
  };
  const auto encode = [q](const std::vector<Index>& d) {
    std::size_t x = 0;
    for (Index v : d) x = x * q + v;
    return static_cast<Index>(x);
  };
  std::vector<std::vector<Index>> vd(nv), md(s.size());
  for (std::size_t x = 0; x < nv; ++x) vd[x] = digits(x, n);
  for (std::size_t x = 0; x < s.size(); ++x) md[x] = digits(x, n * n);

  // P: columns, S·c on the left, c·t on the right.  Q: rows, t·r and r·S.
  std::vector<Index> pl(s.size() * nv), qr(s.size() * nv), pr(q * nv), ql(q * nv);
  std::vector<Index> terms(n), d(n);
  for (std::size_t m = 0; m < s.size(); ++m) {
    for (std::size_t x = 0; x < nv; ++x) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) terms[k] = t.mul(md[m][i * n + k], vd[x][k]);
        d[i] = h.multi_bracket(terms);
      }
      pl[m * nv + x] = encode(d);
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) terms[k] = t.mul(vd[x][k], md[m][k * n + j]);
        d[j] = h.multi_bracket(terms);
      }
      qr[m * nv + x] = encode(d);
    }
  }
  for (Index y = 0; y < q; ++y) {
    for (std::size_t x = 0; x < nv; ++x) {
      for (std::size_t i = 0; i < n; ++i) d[i] = t.mul(vd[x][i], y);
      pr[y * nv + x] = encode(d);
      for (std::size_t i = 0; i < n; ++i) d[i] = t.mul(y, vd[x][i]);
      ql[y * nv + x] = encode(d);
    }
  }
  MoritaContext ctx;
  ctx.name = "matrix";
  ctx.s = sp;
  ctx.t = tp;
  ctx.p_left = make_module(FiniteModule(sp, vec, std::move(pl), Side::Left));
  ctx.p_right = make_module(FiniteModule(tp, vec, std::move(pr), Side::Right));
  ctx.q_left = make_module(FiniteModule(tp, vec, std::move(ql), Side::Left));
  ctx.q_right = make_module(FiniteModule(sp, vec, std::move(qr), Side::Right));
  ctx.ev = [tp, vd, encode, n](Index c, Index row) {
    std::vector<Index> e(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) e[i * n + j] = tp->mul(vd[c][i], vd[row][j]);
    }
    return encode(e);
  };
  // u_j has 1 at j (odd position) or [a,1,a] (even position), a elsewhere.
  std::vector<Index> u(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Index> e(n, a);
    e[j] = j % 2 == 0 ? one : h.bracket(a, one, a);
    u[j] = encode(e);
  }
  const Index corner = u[0];
  ctx.db_unit = {{static_cast<Index>(corner * nv + corner), 1}};
  ctx.ev_inverse = [md, u, encode, n, nv](Index m) {
    SparseRow row;
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<Index> col(n);
      for (std::size_t i = 0; i < n; ++i) col[i] = md[m][i * n + j];
      row.emplace_back(static_cast<Index>(encode(col) * nv + u[j]), j % 2 == 0 ? 1 : -1);
    }
    return row;
  };
  ctx.db_inverse = [tp, vd, n](Index row, Index c) {
    std::vector<Index> prods(n);
    for (std::size_t i = 0; i < n; ++i) prods[i] = tp->mul(vd[row][i], vd[c][i]);
    return tp->heap().multi_bracket(prods);
  };
  return ctx;
}

MoritaContext unit_morita_context(const TrussPtr& tp) {
  if (!tp->is_unital()) throw DomainError("the unit Morita context needs a unital truss");
  MoritaContext ctx;
  ctx.name = "unit";
  ctx.s = tp;
  ctx.t = tp;
  ctx.p_left = regular_module(tp, Side::Left);
  ctx.p_right = regular_module(tp, Side::Right);
  ctx.q_left = ctx.p_left;
  ctx.q_right = ctx.p_right;
  ctx.ev = [tp](Index a, Index b) { return tp->mul(a, b); };
  const Index one = *tp->unit();
  const Index n = static_cast<Index>(tp->size());
  ctx.db_unit = {{one * n + one, 1}};
  ctx.ev_inverse = [one, n](Index x) { return SparseRow{{x * n + one, 1}}; };
  ctx.db_inverse = [tp](Index a, Index b) { return tp->mul(a, b); };
  return ctx;
}

// ---------------------------------------------------------------------------
// Rings and their trusses

ValidationReport validate_ring_module(const FiniteModule& m) {
  ValidationReport r = validate_module(m, true);
  const auto& t = m.truss();
  const auto& h = m.heap();
  const Index zero = t.heap().base();
  const Index e = h.base();
  for (Index x = 0; x < m.size(); ++x) {
    if (m.act(zero, x) != e) r.add("0·m = 0", {x});
  }
  for (Index a = 0; a < t.size(); ++a) {
    for (Index b = 0; b < t.size(); ++b) {
      const Index sum = t.heap().add(a, b);
      for (Index x = 0; x < m.size(); ++x) {
        if (m.act(sum, x) != h.add(m.act(a, x), m.act(b, x))) r.add("(r+s)·m = r·m + s·m", {a, b, x});
      }
    }
    for (Index x = 0; x < m.size(); ++x) {
      for (Index y = 0; y < m.size(); ++y) {
        if (m.act(a, h.add(x, y)) != h.add(m.act(a, x), m.act(a, y))) r.add("r·(m+n) = r·m + r·n", {a, x, y});
      }
    }
  }
  return r;
}

ModulePtr truss_of_ring(const ModulePtr& ring_module) {
  const auto r = validate_ring_module(*ring_module);
  if (!r.ok()) throw DomainError("not a module over the ring (" + r.violations.front().law + ")");
  return ring_module;
}

AbsModule abs_functor(const ModulePtr& mp) {
  const auto abs = absorbers(*mp);
  if (abs.empty()) throw DomainError("the module has no absorbers");
  QuotientModule q = quotient_module(mp, make_subheap(mp->heap(), abs), abs.front());
  const Index zero = q.projection(abs.front());
  AbsModule out;
  out.module = make_module(FiniteModule(mp->truss_ptr(), make_heap(q.module->heap().rebased(zero)),
                                        q.module->action_table(), mp->side()));
  out.unit = q.projection.map;
  out.classes = std::move(q.classes);
  return out;
}

std::vector<Index> abs_morphism(const AbsModule& m, const AbsModule& n, const std::vector<Index>& f) {
  std::vector<Index> out(m.classes.size());
  for (std::size_t c = 0; c < m.classes.size(); ++c) {
    out[c] = n.unit[f[m.classes[c].front()]];
    for (Index x : m.classes[c]) {
      if (n.unit[f[x]] != out[c]) throw DomainError("map does not descend to the absorber quotients");
    }
  }
  return out;
}

std::vector<Index> abs_counit(const ModulePtr& ring_module, const AbsModule& abs_of_n) {
  std::vector<Index> out;
  for (const auto& cls : abs_of_n.classes) out.push_back(cls.front());
  if (!is_bijection(out, ring_module->size())) throw DomainError("counit is not bijective");
  return out;
}

ValidationReport abs_adjunction_check(const ModulePtr& mp, const ModulePtr& np) {
  ValidationReport r = validate_ring_module(*np);
  if (!r.ok()) return r;
  const AbsModule am = abs_functor(mp);
  r.merge(validate_ring_module(*am.module));
  if (!is_linear(*mp, *am.module, am.unit)) r.add("η_M linear", {});

  // ε_{M_Abs} ∘ (η_M)_Abs = id.
  const AbsModule aa = abs_functor(am.module);
  const Map eta_abs = abs_morphism(am, aa, am.unit);
  const Map eps_a = abs_counit(am.module, aa);
  const Map tri1 = compose(eps_a, eta_abs);
  for (Index c = 0; c < tri1.size(); ++c) {
    if (tri1[c] != c) r.add("ε_{M_Abs} ∘ (η_M)_Abs = id", {c});
  }
  // T(ε_N) ∘ η_{T(N)} = id.
  const AbsModule an = abs_functor(np);
  const Map eps_n = abs_counit(np, an);
  if (!is_linear(*an.module, *np, eps_n) || eps_n[an.module->heap().base()] != np->heap().base()) {
    r.add("ε_N is a module isomorphism", {});
  }
  const Map tri2 = compose(eps_n, an.unit);
  for (Index x = 0; x < tri2.size(); ++x) {
    if (tri2[x] != x) r.add("T(ε_N) ∘ η_{T(N)} = id", {x});
  }
  // Hom_R(M_Abs, N) ≅ Hom_T(M, T(N)).
  std::size_t ring_maps = 0;
  for_each_linear_map(*am.module, *np, [&](const Map& f) {
    if (f[am.module->heap().base()] == np->heap().base()) ++ring_maps;
    return true;
  });
  if (ring_maps != count_linear_maps(*mp, *np)) r.add("adjunction bijection count", {static_cast<Index>(ring_maps)});
  return r;
}

ValidationReport abs_naturality_check(const std::vector<ModulePtr>& truss_modules,
                                      const std::vector<ModulePtr>& ring_modules) {
  ValidationReport r;
  std::vector<std::optional<AbsModule>> abs;
  for (const auto& m : truss_modules) {
    if (absorbers(*m).empty()) abs.emplace_back();
    else abs.emplace_back(abs_functor(m));
  }
  // η_{M'} ∘ f = (f_Abs) ∘ η_M.
  for (std::size_t i = 0; i < truss_modules.size(); ++i) {
    for (std::size_t j = 0; j < truss_modules.size(); ++j) {
      if (!abs[i] || !abs[j]) continue;
      for (const auto& f : hom_modules(*truss_modules[i], *truss_modules[j])) {
        const Map fa = abs_morphism(*abs[i], *abs[j], f);
        if (compose(abs[j]->unit, f) != compose(fa, abs[i]->unit)) {
          r.add("η natural", {static_cast<Index>(i), static_cast<Index>(j)});
        }
      }
    }
  }
  // g ∘ ε_N = ε_{N'} ∘ T(g)_Abs.
  std::vector<AbsModule> an;
  std::vector<Map> eps;
  for (const auto& n : ring_modules) {
    an.push_back(abs_functor(n));
    eps.push_back(abs_counit(n, an.back()));
  }
  for (std::size_t i = 0; i < ring_modules.size(); ++i) {
    for (std::size_t j = 0; j < ring_modules.size(); ++j) {
      for (const auto& g : hom_modules(*ring_modules[i], *ring_modules[j])) {
        if (g[ring_modules[i]->heap().base()] != ring_modules[j]->heap().base()) continue;
        const Map ga = abs_morphism(an[i], an[j], g);
        if (compose(g, eps[i]) != compose(eps[j], ga)) r.add("ε natural", {static_cast<Index>(i), static_cast<Index>(j)});
      }
    }
  }
  return r;
}

bool ring_projective(const ModulePtr& np) {
  const auto& n = *np;
  if (!validate_ring_module(n).ok()) throw DomainError("not a module over the ring");
  const TrussPtr& t = n.truss_ptr();
  // Greedy generating set in carrier order.
  std::vector<Index> gens;
  SubHeap span = generated_submodule(n, {n.heap().base()});
  for (Index x = 0; x < n.size() && span.size() < n.size(); ++x) {
    if (span.contains(x)) continue;
    gens.push_back(x);
    std::vector<Index> seed{n.heap().base()};
    seed.insert(seed.end(), gens.begin(), gens.end());
    span = generated_submodule(n, seed);
  }
  if (gens.empty()) return true;  // zero module
  const ModulePtr free = power(regular_module(t), gens.size());
  const std::size_t q = t->size();
  // π(r_1,…,r_g) = Σ r_i x_i.
  Map pi(free->size());
  for (std::size_t v = 0; v < free->size(); ++v) {
    std::size_t rest = v;
    Index acc = n.heap().base();
    for (std::size_t k = gens.size(); k-- > 0;) {
      acc = n.heap().add(acc, n.act(static_cast<Index>(rest % q), gens[k]));
      rest /= q;
    }
    pi[v] = acc;
  }
  const Index zero = free->heap().base();
  return find_linear(n, *free, [&](const Map& s) {
           if (s[n.heap().base()] != zero) return false;
           for (Index x = 0; x < n.size(); ++x) {
             if (pi[s[x]] != x) return false;
           }
           return true;
         }).has_value();
}

std::vector<ModulePtr> ring_module_family(std::size_t n, std::size_t max_size) {
  const TrussPtr t = truss_from_ring(n);
  std::vector<ModulePtr> out;
  for (const auto& m : module_family(t, max_size, true)) {
    if (m->size() == 0) continue;
    // 0·m is the zero of a ring module; re-base there.
    const Index z = m->act(t->heap().base(), 0);
    auto rebased = make_module(FiniteModule(t, make_heap(m->heap().rebased(z)), m->action_table(), m->side()));
    if (validate_ring_module(*rebased).ok()) out.push_back(rebased);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exact and split sequences

std::optional<ExactSequence> exactness(const ModuleMorphism& f, const ModuleMorphism& g) {
  if (f.codomain->size() != g.map.size()) throw DomainError("maps are not composable");
  const Map imf = image_of(f.map);
  for (Index e : image_of(g.map)) {
    Map fibre;
    for (Index x = 0; x < g.map.size(); ++x) {
      if (g.map[x] == e) fibre.push_back(x);
    }
    if (fibre == imf) return ExactSequence{f, g, e};
  }
  return std::nullopt;
}

SplitIso split_product(const ModuleMorphism& f, const ModuleMorphism& g, std::optional<std::vector<Index>> retraction) {
  const auto seq = exactness(f, g);
  if (!seq) throw DomainError("the sequence is not exact");
  if (!is_epi(g)) throw DomainError("the second map is not surjective");
  const auto& m = *f.domain;
  const auto& n = *f.codomain;
  const auto& p = *g.codomain;
  if (!retraction) {
    retraction = find_linear(n, m, [&](const Map& gm) {
      for (Index x = 0; x < m.size(); ++x) {
        if (gm[f.map[x]] != x) return false;
      }
      return true;
    });
    if (!retraction) throw DomainError("the first map has no retraction");
  }
  const Map& gamma = *retraction;
  SplitIso out;
  out.e = seq->e;
  out.splitting = gamma;
  auto& r = out.report;
  if (!is_linear(n, m, gamma)) r.add("retraction linear", {});
  for (Index x = 0; x < m.size(); ++x) {
    if (gamma[f.map[x]] != x) r.add("γ ∘ f = id", {x});
  }
  const auto prod = product(f.domain, g.codomain);
  out.product = prod.module;
  const Index np = static_cast<Index>(p.size());
  out.forward.resize(n.size());
  for (Index x = 0; x < n.size(); ++x) out.forward[x] = gamma[x] * np + g.map[x];
  // Φ⁻¹(m, p) = [n_p, fγ(n_p), f(m)].
  Map lift(p.size(), 0);
  for (Index x = static_cast<Index>(n.size()); x-- > 0;) lift[g.map[x]] = x;
  out.inverse.resize(prod.module->size());
  for (Index a = 0; a < m.size(); ++a) {
    for (Index b = 0; b < np; ++b) {
      const Index nb = lift[b];
      out.inverse[a * np + b] = n.heap().bracket(nb, f.map[gamma[nb]], f.map[a]);
    }
  }
  if (!is_linear(n, *prod.module, out.forward)) r.add("Φ linear", {});
  if (!is_linear(*prod.module, n, out.inverse)) r.add("Φ⁻¹ linear", {});
  for (Index x = 0; x < n.size(); ++x) {
    if (out.inverse[out.forward[x]] != x) r.add("Φ⁻¹ ∘ Φ = id", {x});
  }
  for (Index y = 0; y < prod.module->size(); ++y) {
    if (out.forward[out.inverse[y]] != y) r.add("Φ ∘ Φ⁻¹ = id", {y});
  }
  return out;
}

SplitIso star_sum(const ModuleMorphism& f, const ModuleMorphism& g, std::optional<std::vector<Index>> section) {
  const auto seq = exactness(f, g);
  if (!seq) throw DomainError("the sequence is not exact");
  if (!is_mono(f)) throw DomainError("the first map is not injective");
  const auto& m = *f.domain;
  const auto& n = *f.codomain;
  const auto& p = *g.codomain;
  if (!section) {
    section = find_linear(p, n, [&](const Map& s) {
      for (Index x = 0; x < p.size(); ++x) {
        if (g.map[s[x]] != x) return false;
      }
      return true;
    });
    if (!section) throw DomainError("the second map has no section");
  }
  const Map& sigma = *section;
  SplitIso out;
  out.e = seq->e;
  out.splitting = sigma;
  auto& r = out.report;
  if (!is_linear(p, n, sigma)) r.add("section linear", {});
  for (Index x = 0; x < p.size(); ++x) {
    if (g.map[sigma[x]] != x) r.add("g ∘ σ = id", {x});
  }
  const Index se = sigma[out.e];
  const auto it = std::find(f.map.begin(), f.map.end(), se);
  if (it == f.map.end()) throw DomainError("σ(e) is not in the image of the first map");
  out.e_prime = static_cast<Index>(it - f.map.begin());
  const auto prod = product(induced_module(f.domain, out.e_prime), g.codomain);
  out.product = prod.module;
  const Index np = static_cast<Index>(p.size());
  // Θ(m, p) = [f(m), σ(e), σ(p)].
  out.forward.resize(prod.module->size());
  for (Index a = 0; a < m.size(); ++a) {
    for (Index b = 0; b < np; ++b) out.forward[a * np + b] = n.heap().bracket(f.map[a], se, sigma[b]);
  }
  // Θ⁻¹(n) = (f⁻¹[n, σg(n), σ(e)], g(n)).
  Map finv(n.size(), 0);
  std::vector<bool> in_image(n.size(), false);
  for (Index a = 0; a < m.size(); ++a) {
    finv[f.map[a]] = a;
    in_image[f.map[a]] = true;
  }
  out.inverse.resize(n.size());
  for (Index x = 0; x < n.size(); ++x) {
    const Index y = n.heap().bracket(x, sigma[g.map[x]], se);
    if (!in_image[y]) r.add("[n, σg(n), σ(e)] ∈ im f", {x});
    out.inverse[x] = finv[y] * np + g.map[x];
  }
  if (!is_linear(*prod.module, n, out.forward)) r.add("Θ linear", {});
  if (!is_linear(n, *prod.module, out.inverse)) r.add("Θ⁻¹ linear", {});
  for (Index y = 0; y < prod.module->size(); ++y) {
    if (out.inverse[out.forward[y]] != y) r.add("Θ⁻¹ ∘ Θ = id", {y});
  }
  for (Index x = 0; x < n.size(); ++x) {
    if (out.forward[out.inverse[x]] != x) r.add("Θ ∘ Θ⁻¹ = id", {x});
  }
  return out;
}

PowerSplit power_split(const TrussPtr& t, std::size_t k, std::size_t n) {
  if (k == 0 || k > n) throw DomainError("power split needs 1 ≤ k ≤ n");
  const auto reg = regular_module(t);
  const ModulePtr tk = power(reg, k);
  const ModulePtr tn = power(reg, n);
  const std::size_t q = t->size();
  const auto split = [q](std::size_t x, std::size_t len) {
    std::vector<std::size_t> d(len);
    for (std::size_t i = len; i-- > 0;) {
      d[i] = x % q;
      x /= q;
    }
    return d;
  };
  Map phi(tk->size()), gamma(tn->size());
  for (std::size_t x = 0; x < tk->size(); ++x) {
    auto d = split(x, k);
    std::size_t v = 0;
    for (std::size_t i = 0; i < n; ++i) v = v * q + d[std::min(i, k - 1)];
    phi[x] = static_cast<Index>(v);
  }
  for (std::size_t x = 0; x < tn->size(); ++x) {
    auto d = split(x, n);
    std::size_t v = 0;
    for (std::size_t i = 0; i < k; ++i) v = v * q + d[i];
    gamma[x] = static_cast<Index>(v);
  }
  const Map im = image_of(phi);
  QuotientModule quo = quotient_module(tn, make_subheap(tn->heap(), im), phi[tk->heap().base()]);
  PowerSplit out;
  out.phi = ModuleMorphism{tk, tn, phi};
  out.psi = quo.projection;
  out.iso = split_product(out.phi, out.psi, gamma);
  out.absorbers = absorbers(*quo.module);
  return out;
}

std::optional<StarSumInstance> find_star_sum_instance(const TrussPtr& t, std::size_t max_size) {
  std::vector<ModulePtr> fam;
  for (const auto& m : module_family(t, max_size)) {
    if (m->size() >= 2) fam.push_back(m);
  }
  std::optional<StarSumInstance> fallback;
  for (const auto& n : fam) {
    for (const auto& m : fam) {
      for (const auto& p : fam) {
        if (m->size() * p->size() != n->size()) continue;
        for (const auto& f : hom_modules(*m, *n)) {
          const ModuleMorphism fm{m, n, f};
          if (!is_mono(fm)) continue;
          const bool retractable = find_linear(*n, *m, [&](const Map& gm) {
                                     for (Index x = 0; x < m->size(); ++x) {
                                       if (gm[f[x]] != x) return false;
                                     }
                                     return true;
                                   }).has_value();
          if (retractable && fallback) continue;
          for (const auto& g : hom_modules(*n, *p)) {
            const ModuleMorphism gm{n, p, g};
            if (!is_epi(gm) || !exactness(fm, gm)) continue;
            const bool has_section = find_linear(*p, *n, [&](const Map& s) {
                                       for (Index x = 0; x < p->size(); ++x) {
                                         if (g[s[x]] != x) return false;
                                       }
                                       return true;
                                     }).has_value();
            if (!has_section) continue;
            StarSumInstance inst{fm, gm, star_sum(fm, gm)};
            if (!retractable) return inst;
            if (!fallback) fallback = std::move(inst);
            break;
          }
        }
      }
    }
  }
  return fallback;
}

// ---------------------------------------------------------------------------
// Projectivity

std::vector<ModuleMorphism> epi_family(const TrussPtr& t, std::size_t max_size) {
  std::vector<ModulePtr> fam;
  for (const auto& m : module_family(t, max_size)) {
    if (m->size() > 0) fam.push_back(m);
  }
  std::vector<ModuleMorphism> out;
  for (const auto& m : fam) {
    for (const auto& n : fam) {
      if (n->size() > m->size()) continue;
      for (const auto& f : hom_modules(*m, *n)) {
        if (image_of(f).size() == n->size()) out.push_back(ModuleMorphism{m, n, f});
      }
    }
  }
  return out;
}

namespace {

// Linear h: P → 𝒯^X with ε(h(x)) = target[x], images from the tail ball.
// Returns nullopt when none exists within the ball; `tested` is false when
// the candidate count exceeds the budget.
std::optional<std::vector<CoproductElement>> lift_into_free(const ModulePtr& pp, const FreeModule& free,
                                                            const std::function<Index(const CoproductElement&)>& eps,
                                                            const Map& target, std::int64_t bound,
                                                            std::size_t budget, bool& tested) {
  const auto& p = *pp;
  tested = false;
  const auto dec = decompose(p.heap());
  const std::vector<CoproductElement> ball = free.ball(bound);
  std::map<Index, std::vector<std::size_t>> fibre;
  for (std::size_t i = 0; i < ball.size(); ++i) fibre[eps(ball[i])].push_back(i);
  const Index base = p.heap().base();
  std::vector<Index> points{base};
  points.insert(points.end(), dec.generators.begin(), dec.generators.end());
  std::vector<const std::vector<std::size_t>*> choices;
  double count = 1;
  for (Index x : points) {
    const auto it = fibre.find(target[x]);
    if (it == fibre.end()) {
      tested = true;
      return std::nullopt;
    }
    choices.push_back(&it->second);
    count *= static_cast<double>(it->second.size());
  }
  if (count > static_cast<double>(budget)) return std::nullopt;
  tested = true;
  const auto& cop = free.coproduct();
  const std::size_t rank = dec.rank();
  std::vector<std::size_t> pick(points.size(), 0);
  std::vector<CoproductElement> h(p.size());
  do {
    const CoproductElement& he = ball[(*choices[0])[pick[0]]];
    bool ok = true;
    for (std::size_t i = 0; i < rank && ok; ++i) {
      const CoproductElement& hg = ball[(*choices[i + 1])[pick[i + 1]]];
      const auto d = static_cast<std::int64_t>(dec.orders[i]);
      ok = cop.affine_sum({{hg, d}, {he, 1 - d}}) == he;
    }
    if (!ok) continue;
    for (Index x = 0; x < p.size(); ++x) {
      std::vector<std::pair<CoproductElement, std::int64_t>> terms;
      std::int64_t rest = 1;
      for (std::size_t i = 0; i < rank; ++i) {
        const auto c = static_cast<std::int64_t>(dec.coords[x * rank + i]);
        if (c == 0) continue;
        terms.emplace_back(ball[(*choices[i + 1])[pick[i + 1]]], c);
        rest -= c;
      }
      terms.emplace_back(he, rest);
      h[x] = cop.affine_sum(terms);
    }
    for (Index a = 0; a < p.truss().size() && ok; ++a) {
      for (Index x = 0; x < p.size() && ok; ++x) ok = free.act(a, h[x]) == h[p.act(a, x)];
    }
    for (Index x = 0; x < p.size() && ok; ++x) ok = eps(h[x]) == target[x];
    if (ok) return h;
  } while ([&] {
    for (std::size_t i = pick.size(); i-- > 0;) {
      if (++pick[i] < choices[i]->size()) return true;
      pick[i] = 0;
    }
    return false;
  }());
  return std::nullopt;
}

}  // namespace

ProjectivityReport projectivity(const ModulePtr& pp, const std::vector<ModuleMorphism>& epis, std::int64_t free_bound,
                                std::size_t free_budget) {
  ProjectivityReport out;
  const auto& p = *pp;
  for (std::size_t i = 0; i < epis.size(); ++i) {
    const auto& pi = epis[i];
    if (!same_truss(*pi.domain, p)) continue;
    ++out.epis;
    std::set<Map> reachable;
    for_each_linear_map(p, *pi.domain, [&](const Map& h) {
      reachable.insert(compose(pi.map, h));
      return true;
    });
    for (const auto& f : hom_modules(p, *pi.codomain)) {
      ++out.lifts;
      if (!reachable.count(f)) {
        out.passed = false;
        if (!out.blocking) out.blocking = std::make_pair(i, f);
      }
    }
  }
  out.scope = "family(" + std::to_string(out.epis) + " epis)";
  if (p.size() > 0 && p.truss().size() > 0) {
    std::vector<std::string> gens = p.heap().labels();
    const FreeModule free(p.truss_ptr(), gens);
    Map id(p.size());
    for (Index x = 0; x < p.size(); ++x) id[x] = x;
    const auto eps = [&](const CoproductElement& z) { return free.extend(p, id, z); };
    bool tested = false;
    std::optional<std::vector<CoproductElement>> h;
    try {
      h = lift_into_free(pp, free, eps, id, free_bound, free_budget, tested);
    } catch (const SizeLimitError&) {
      tested = false;
    }
    out.counit_tested = tested;
    out.counit_lifted = h.has_value();
    if (tested) {
      out.scope += " + counit(bounded(" + std::to_string(free_bound) + "))";
      if (!h) out.passed = false;
    } else {
      out.scope += " + counit(skipped)";
    }
  }
  return out;
}

ProjectivityReport free_projectivity(const TrussPtr& t, const std::vector<ModuleMorphism>& epis, std::int64_t bound) {
  ProjectivityReport out;
  const FreeModule free(t, {"x"});
  const auto ball = free.ball(bound);
  for (std::size_t i = 0; i < epis.size(); ++i) {
    const auto& pi = epis[i];
    if (pi.domain->truss_ptr() != t && !(pi.domain->truss() == *t)) continue;
    ++out.epis;
    for (Index n = 0; n < pi.codomain->size(); ++n) {
      ++out.lifts;
      const auto it = std::find(pi.map.begin(), pi.map.end(), n);
      bool ok = it != pi.map.end();
      const Index m = ok ? static_cast<Index>(it - pi.map.begin()) : 0;
      for (std::size_t z = 0; z < ball.size() && ok; ++z) {
        ok = pi.map[free.extend(*pi.domain, {m}, ball[z])] == free.extend(*pi.codomain, {n}, ball[z]);
      }
      if (!ok && !out.blocking) {
        out.passed = false;
        out.blocking = std::make_pair(i, Map{n});
      }
    }
  }
  out.scope = "family(" + std::to_string(out.epis) + " epis) on bounded(" + std::to_string(bound) + ")";
  return out;
}

FreeFactorReport free_factor(const ModulePtr& pp, std::int64_t bound, std::int64_t section_bound) {
  FreeFactorReport out;
  auto& r = out.report;
  const auto& p = *pp;
  if (p.size() == 0) throw DomainError("free_factor needs a non-empty module");
  const FreeModule free(p.truss_ptr(), p.heap().labels());
  Map id(p.size());
  for (Index x = 0; x < p.size(); ++x) id[x] = x;
  const auto eps = [&](const CoproductElement& z) { return free.extend(p, id, z); };
  bool tested = false;
  const auto phi = lift_into_free(pp, free, eps, id, section_bound, std::size_t{1} << 22, tested);
  out.scope = "bounded(" + std::to_string(bound) + ")";
  if (!phi) {
    r.add(tested ? "counit section within the ball" : "counit section search budget", {});
    return out;
  }
  out.section = *phi;
  const auto& cop = free.coproduct();
  const Index p0 = p.heap().base();
  // Class of x: {[x, φ(p0), φ(p)]}; the least member represents it.
  const auto rep = [&](const CoproductElement& x) {
    CoproductElement best = cop.bracket(x, out.section[p0], out.section[0]);
    for (Index y = 1; y < p.size(); ++y) best = std::min(best, cop.bracket(x, out.section[p0], out.section[y]));
    return best;
  };
  const auto ball = free.ball(bound);
  out.ball = ball.size();
  std::map<std::pair<Index, CoproductElement>, std::size_t> phi_img;
  std::set<CoproductElement> classes;
  for (std::size_t i = 0; i < ball.size(); ++i) {
    const auto& x = ball[i];
    const CoproductElement q = rep(x);
    classes.insert(q);
    if (!phi_img.emplace(std::make_pair(eps(x), q), i).second) r.add("Φ injective on the ball", {static_cast<Index>(i)});
    for (Index a = 0; a < p.truss().size(); ++a) {
      const CoproductElement tx = free.act(a, x);
      if (eps(tx) != p.act(a, eps(x))) r.add("ε linear", {a, static_cast<Index>(i)});
      const CoproductElement qt = rep(tx);
      for (Index y = 0; y < p.size(); ++y) {
        if (rep(free.act(a, cop.bracket(x, out.section[p0], out.section[y]))) != qt) {
          r.add("Q action well defined", {a, static_cast<Index>(i), y});
        }
      }
    }
    // Φ⁻¹(Φ(x)) = [n_q, φε(n_q), φε(x)] = x.
    if (cop.bracket(q, out.section[eps(q)], out.section[eps(x)]) != x) r.add("Φ⁻¹ ∘ Φ = id", {static_cast<Index>(i)});
  }
  out.classes = classes.size();
  for (const auto& q : classes) {
    for (Index m = 0; m < p.size(); ++m) {
      const CoproductElement y = cop.bracket(q, out.section[eps(q)], out.section[m]);
      if (eps(y) != m || rep(y) != q) r.add("Φ ∘ Φ⁻¹ = id", {m});
    }
  }
  // Q has the absorber [φ(P)].
  const CoproductElement abs = rep(out.section[p0]);
  for (Index a = 0; a < p.truss().size(); ++a) {
    if (rep(free.act(a, out.section[p0])) != abs) r.add("[φ(P)] absorbs", {a});
  }
  return out;
}

SplitIso tiny_factor(const ModulePtr& pp, const DualBasis& basis) {
  const auto& p = *pp;
  if (basis.unital || !check_dual_basis(pp, basis).holds) throw DomainError("tiny_factor needs a T-valued dual basis");
  const TrussPtr& t = p.truss_ptr();
  const std::size_t s = basis.size();
  const std::size_t q = t->size();
  const ModulePtr ts = power(regular_module(t), s);
  Map phi(p.size()), gamma(ts->size());
  for (Index x = 0; x < p.size(); ++x) {
    std::size_t v = 0;
    for (std::size_t k = 0; k < s; ++k) v = v * q + basis.covectors[k][x];
    phi[x] = static_cast<Index>(v);
  }
  std::vector<Index> terms(s);
  for (std::size_t v = 0; v < ts->size(); ++v) {
    std::size_t rest = v;
    for (std::size_t k = s; k-- > 0;) {
      terms[k] = p.act(static_cast<Index>(rest % q), basis.elements[k]);
      rest /= q;
    }
    gamma[v] = p.heap().multi_bracket(terms);
  }
  QuotientModule quo = quotient_module(ts, make_subheap(ts->heap(), image_of(phi)), phi[p.heap().base()]);
  return split_product(ModuleMorphism{pp, ts, phi}, quo.projection, gamma);
}

FreeNotTinyReport free_not_tiny_witness(const TrussPtr& t, std::size_t s_max, std::int64_t bound) {
  FreeNotTinyReport out;
  if (!t->is_unital()) throw DomainError("free_not_tiny_witness needs a unital truss");
  const auto reg = regular_module(t);
  const CoproductModule cm({reg, reg});
  const auto& cop = cm.coproduct();
  const auto ball = cop.ball(bound);
  const Index one = *t->unit();

  // ℓ is T-invariant and a heap morphism to Z.
  out.tail_invariant = true;
  for (std::size_t i = 0; i < ball.size(); ++i) {
    for (Index a = 0; a < t->size(); ++a) {
      if (tail_length(cm.act(a, ball[i])) != tail_length(ball[i])) {
        out.tail_invariant = false;
        out.report.add("ℓ(t·x) = ℓ(x)", {a, static_cast<Index>(i)});
      }
    }
  }
  const std::size_t sample = std::min<std::size_t>(ball.size(), 24);
  for (std::size_t i = 0; i < sample; ++i) {
    for (std::size_t j = 0; j < sample; ++j) {
      for (std::size_t k = 0; k < sample; ++k) {
        const auto lhs = tail_length(cop.bracket(ball[i], ball[j], ball[k]));
        if (lhs != tail_length(ball[i]) - tail_length(ball[j]) + tail_length(ball[k])) {
          out.tail_invariant = false;
          out.report.add("ℓ heap morphism", {static_cast<Index>(i), static_cast<Index>(j), static_cast<Index>(k)});
        }
      }
    }
  }

  // Covectors T ⊞ T → T are pairs of linear maps T → T.
  const auto ends = hom_modules(*reg, *reg);
  std::vector<std::pair<std::size_t, std::size_t>> covs;
  for (std::size_t i = 0; i < ends.size(); ++i) {
    for (std::size_t j = 0; j < ends.size(); ++j) covs.emplace_back(i, j);
  }
  const auto apply = [&](std::size_t c, const CoproductElement& x) {
    const auto w = cop.unfold(x);
    SparseRow terms;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const auto& f = ends[w[i].summand == 0 ? covs[c].first : covs[c].second];
      terms.emplace_back(f[w[i].element], i % 2 == 0 ? 1 : -1);
    }
    return t->heap().affine_sum(terms);
  };
  // z = b a b ⋯ b with |m|+1 letters b from the second summand.
  std::map<std::int64_t, std::pair<CoproductElement, std::vector<Index>>> witness;
  const auto z_for = [&](std::int64_t m) -> const std::pair<CoproductElement, std::vector<Index>>& {
    const std::int64_t len = m < 0 ? -m : m;
    auto it = witness.find(len);
    if (it != witness.end()) return it->second;
    AlternatingWord w;
    for (std::int64_t i = 0; i < len; ++i) {
      w.push_back(Letter{1, one});
      w.push_back(Letter{0, one});
    }
    w.push_back(Letter{1, one});
    const CoproductElement z = cop.fold(w);
    std::vector<Index> vals;
    for (std::size_t c = 0; c < covs.size(); ++c) vals.push_back(apply(c, z));
    return witness.emplace(len, std::make_pair(z, std::move(vals))).first->second;
  };
  // t·e for every t and ball element.
  std::vector<std::vector<CoproductElement>> acts(t->size());
  std::vector<std::int64_t> tails(ball.size());
  for (std::size_t i = 0; i < ball.size(); ++i) tails[i] = tail_length(ball[i]);
  for (Index a = 0; a < t->size(); ++a) {
    for (const auto& x : ball) acts[a].push_back(cm.act(a, x));
  }
  for (std::size_t s = 1; s <= s_max; s += 2) {
    std::vector<std::size_t> el(s, 0);
    do {
      std::int64_t m = 0;
      for (std::size_t k = 0; k < s; ++k) m += (k % 2 == 0 ? 1 : -1) * tails[el[k]];
      const auto& [z, vals] = z_for(m);
      const std::int64_t lz = tail_length(z);
      std::vector<std::size_t> cv(s, 0);
      do {
        ++out.candidates;
        CoproductElement rhs = acts[vals[cv[0]]][el[0]];
        for (std::size_t k = 1; k + 1 < s; k += 2) {
          rhs = cop.bracket(rhs, acts[vals[cv[k]]][el[k]], acts[vals[cv[k + 1]]][el[k + 1]]);
        }
        if (tail_length(rhs) != m) out.report.add("ℓ of the right-hand side", {static_cast<Index>(out.candidates)});
        if (rhs != z && lz == (m < 0 ? -m : m) + 1) ++out.refuted;
      } while (next_tuple(cv, covs.size()));
    } while (next_tuple(el, ball.size()));
  }
  return out;
}

}  // namespace trusskit
