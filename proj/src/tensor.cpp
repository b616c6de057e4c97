#include "trusskit/tensor.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace trusskit {

namespace {

// Sorted, merged, zero-free.
SparseRow normalize(SparseRow row) {
  std::sort(row.begin(), row.end());
  SparseRow out;
  for (const auto& [c, v] : row) {
    if (!out.empty() && out.back().first == c) {
      out.back().second = checked_add(out.back().second, v);
    } else {
      out.emplace_back(c, v);
    }
  }
  std::erase_if(out, [](const auto& p) { return p.second == 0; });
  return out;
}

std::string map_label(const FiniteAbelianHeap& target, const std::vector<Index>& f) {
  std::string s = "map(";
  for (std::size_t x = 0; x < f.size(); ++x) s += (x ? "," : "") + target.label(f[x]);
  return s + ")";
}

bool same_truss(const TrussPtr& a, const TrussPtr& b) { return a == b || (a && b && *a == *b); }

}  // namespace

// ---------------------------------------------------------------------------
// Presentations

Presentation present(const ModulePtr& m) {
  Presentation p;
  const auto& h = m->heap();
  const std::size_t n = h.size();
  p.generators = n;
  p.labels = h.labels();
  p.base = h.base();
  p.truss = m->truss_ptr();
  p.side = m->side();
  const Index e = h.base();
  for (Index a = 0; a < n; ++a) {
    for (Index b = a; b < n; ++b) {
      SparseRow r = normalize({{h.add(a, b), 1}, {a, -1}, {b, -1}, {e, 1}});
      if (!r.empty()) p.relations.push_back(std::move(r));
    }
  }
  p.act = [m](Index t, Index y) { return SparseRow{{m->act(t, y), 1}}; };
  return p;
}

Presentation present_unital_extension(const TrussPtr& t, Side side) {
  Presentation p = present(regular_module(t, side));
  const Index star = static_cast<Index>(t->size());
  p.generators = t->size() + 1;
  p.labels.push_back("*");
  p.side = side;
  p.act = [t, side, star](Index s, Index y) {
    if (y == star) return SparseRow{{s, 1}};
    return SparseRow{{side == Side::Left ? t->mul(s, y) : t->mul(y, s), 1}};
  };
  return p;
}

// ---------------------------------------------------------------------------
// TensorProduct

TensorProduct::TensorProduct(const Presentation& m, const Presentation& n) : TensorProduct(m, n, Options{}) {}

TensorProduct::TensorProduct(const Presentation& m, const Presentation& n, Options options)
    : gm_(m.generators), gn_(n.generators), left_labels_(m.labels), right_labels_(n.labels),
      max_carrier_(options.max_carrier) {
  if (m.side != Side::Right) throw DomainError("left factor of a tensor must be a right module");
  if (n.side != Side::Left) throw DomainError("right factor of a tensor must be a left module");
  if (!same_truss(m.truss, n.truss)) throw DomainError("tensor factors over different trusses");
  if (empty()) {
    finite_ = true;
    heap_ = empty_heap();
    return;
  }
  const std::size_t dim = gm_ * gn_;
  if (dim > options.max_dim) {
    throw SizeLimitError("tensor needs " + std::to_string(dim) + " generator pairs, above the limit of " +
                         std::to_string(options.max_dim));
  }
  const auto [ba, bb] = options.base_pair.value_or(std::pair<Index, Index>{m.base, n.base});
  if (ba >= gm_ || bb >= gn_) throw DomainError("base pair out of range");
  base_ = pair_index(ba, bb);

  std::set<SparseRow> rows;
  auto emit = [&](SparseRow r) {
    r = normalize(std::move(r));
    if (r.empty()) return;
    rows.insert(std::move(r));
  };
  for (const auto& rel : m.relations) {
    for (Index b = 0; b < gn_; ++b) {
      SparseRow r;
      for (const auto& [a, c] : rel) r.emplace_back(pair_index(a, b), c);
      emit(std::move(r));
    }
  }
  for (Index a = 0; a < gm_; ++a) {
    for (const auto& rel : n.relations) {
      SparseRow r;
      for (const auto& [b, c] : rel) r.emplace_back(pair_index(a, b), c);
      emit(std::move(r));
    }
  }
  const std::size_t tsize = m.truss->size();
  std::vector<SparseRow> right_act(tsize * gn_);
  for (Index t = 0; t < tsize; ++t) {
    for (Index b = 0; b < gn_; ++b) right_act[t * gn_ + b] = n.act(t, b);
  }
  for (Index t = 0; t < tsize; ++t) {
    for (Index a = 0; a < gm_; ++a) {
      const SparseRow at = m.act(t, a);
      for (Index b = 0; b < gn_; ++b) {
        SparseRow r;
        for (const auto& [a2, c] : at) r.emplace_back(pair_index(a2, b), c);
        for (const auto& [b2, c] : right_act[t * gn_ + b]) r.emplace_back(pair_index(a, b2), -c);
        emit(std::move(r));
      }
    }
  }
  relators_ = rows.size();

  HermiteBasis basis(dim - 1);
  for (const auto& r : rows) {
    SparseRow reduced;
    for (const auto& [p, c] : r) {
      if (p == base_) continue;
      reduced.emplace_back(p > base_ ? p - 1 : p, c);
    }
    basis.insert_sparse(reduced);
  }
  lattice_ = IntegerLattice::from_basis(std::move(basis));
  finite_ = lattice_.quotient_finite();
  if (finite_) materialize();
}

bool TensorProduct::finite() const { return finite_; }

IntVector TensorProduct::reduce_coords(const IntVector& v) const {
  IntVector w;
  w.reserve(v.size() - 1);
  for (std::size_t p = 0; p < v.size(); ++p) {
    if (p != base_) w.push_back(v[p]);
  }
  return w;
}

IntVector TensorProduct::expand_coords(const IntVector& w) const {
  IntVector v(w.size() + 1);
  Integer sum = 0;
  for (std::size_t p = 0, q = 0; p < v.size(); ++p) {
    if (p == base_) continue;
    v[p] = w[q++];
    sum += v[p];
  }
  v[base_] = 1 - sum;
  return v;
}

IntVector TensorProduct::pair_vector(Index a, Index b) const {
  IntVector v(pair_count(), 0);
  v[pair_index(a, b)] = 1;
  return v;
}

IntVector TensorProduct::class_of(const IntVector& v) const {
  if (empty()) throw DomainError("class in an empty tensor");
  if (v.size() != pair_count()) throw DomainError("pair vector has wrong length");
  Integer sum = 0;
  for (const auto& x : v) sum += x;
  if (sum != 1) throw DomainError("pair vector coefficients must sum to one");
  return lattice_.coordinates(reduce_coords(v));
}

IntVector TensorProduct::class_of_pair(Index a, Index b) const { return class_of(pair_vector(a, b)); }

bool TensorProduct::same_class(const IntVector& v, const IntVector& w) const { return class_of(v) == class_of(w); }

void TensorProduct::materialize() {
  radix_ = lattice_.quotient_invariants();
  Integer total = 1;
  for (const auto& d : radix_) total *= d;
  if (total > max_carrier_) return;  // heap() reports the limit
  for (const auto& d : radix_) moduli_.push_back(d.get_ui());
  const std::size_t k = moduli_.size();
  const auto& V = lattice_.smith().V;
  const auto& pos = lattice_.quotient_positions();
  pair_coords_.assign(pair_count() * k, 0);
  for (Index p = 0; p < pair_count(); ++p) {
    if (p == base_) continue;
    const std::size_t row = p > base_ ? p - 1 : p;
    for (std::size_t i = 0; i < k; ++i) pair_coords_[p * k + i] = mod_reduce(V[row][pos[i]], moduli_[i]);
  }
  HeapPtr group = abelian_group_heap(moduli_);
  const std::size_t size = group->size();
  simple_.assign(pair_count(), 0);
  std::vector<std::string> labels(size);
  std::vector<bool> named(size, false);
  std::vector<std::uint64_t> c(k);
  for (Index p = 0; p < pair_count(); ++p) {
    std::copy(pair_coords_.begin() + p * k, pair_coords_.begin() + (p + 1) * k, c.begin());
    const Index cls = index_from(c);
    simple_[p] = cls;
    if (!named[cls]) {
      labels[cls] = left_labels_[p / gn_] + "⊗" + right_labels_[p % gn_];
      named[cls] = true;
    }
  }
  for (std::size_t x = 0; x < size; ++x) {
    if (!named[x]) labels[x] = "cls" + group->label(static_cast<Index>(x));
  }
  heap_ = make_heap(group->relabeled(std::move(labels)));
}

Index TensorProduct::index_from(const std::vector<std::uint64_t>& c) const {
  std::uint64_t idx = 0;
  for (std::size_t i = 0; i < c.size(); ++i) idx = idx * moduli_[i] + c[i];
  return static_cast<Index>(idx);
}

std::vector<std::uint64_t> TensorProduct::digits(Index cls) const {
  std::vector<std::uint64_t> c(moduli_.size());
  std::uint64_t rest = cls;
  for (std::size_t i = moduli_.size(); i-- > 0;) {
    c[i] = rest % moduli_[i];
    rest /= moduli_[i];
  }
  return c;
}

std::vector<std::uint64_t> TensorProduct::coords_from(const IntVector& v, const std::vector<SparseRow>* images) const {
  const std::size_t k = moduli_.size();
  std::vector<std::uint64_t> acc(k, 0);
  auto push = [&](Index q, const Integer& coef) {
    for (std::size_t i = 0; i < k; ++i) {
      const std::uint64_t c = mod_reduce(coef, moduli_[i]);
      acc[i] = (acc[i] + c * pair_coords_[q * k + i]) % moduli_[i];
    }
  };
  for (Index p = 0; p < v.size(); ++p) {
    if (sgn(v[p]) == 0) continue;
    if (images == nullptr) {
      push(p, v[p]);
    } else {
      for (const auto& [q, c] : (*images)[p]) push(q, v[p] * static_cast<long>(c));
    }
  }
  return acc;
}

const HeapPtr& TensorProduct::heap() const {
  if (!finite_) throw InfiniteCarrierError("tensor product has a free factor; its carrier is infinite");
  if (!heap_) throw SizeLimitError("tensor carrier exceeds " + std::to_string(max_carrier_) + " classes");
  return heap_;
}

Index TensorProduct::index_of(const IntVector& coords) const {
  if (coords.size() != radix_.size()) throw DomainError("class coordinates have wrong length");
  Integer idx = 0;
  for (std::size_t i = 0; i < coords.size(); ++i) idx = idx * radix_[i] + coords[i];
  return static_cast<Index>(idx.get_ui());
}

Index TensorProduct::simple(Index a, Index b) const {
  heap();
  return simple_[pair_index(a, b)];
}

IntVector TensorProduct::representative(Index cls) const {
  heap();
  IntVector coords(moduli_.size());
  const auto c = digits(cls);
  for (std::size_t i = 0; i < c.size(); ++i) coords[i] = static_cast<unsigned long>(c[i]);
  return expand_coords(lattice_.representative(coords));
}

// Induced maps are affine on the class group, so they are fixed by their
// values on the base class and on the k cyclic generators.
std::vector<Index> TensorProduct::induce(const std::function<Index(Index, Index)>& f,
                                         const FiniteAbelianHeap& target) const {
  const std::size_t n = heap()->size();
  if (n == 0) return {};
  std::vector<Index> values(pair_count());
  for (Index a = 0; a < gm_; ++a) {
    for (Index b = 0; b < gn_; ++b) values[pair_index(a, b)] = f(a, b);
  }
  const auto eval = [&](Index cls) {
    const IntVector v = representative(cls);
    std::vector<std::pair<Index, Integer>> terms;
    for (std::size_t p = 0; p < v.size(); ++p) {
      if (sgn(v[p]) != 0) terms.emplace_back(values[p], v[p]);
    }
    return target.affine_sum(terms);
  };
  const std::size_t k = moduli_.size();
  const Index origin = eval(0);
  std::vector<Index> steps(k);
  std::uint64_t weight = 1;
  for (std::size_t i = k; i-- > 0;) {
    steps[i] = target.sub(eval(static_cast<Index>(weight)), origin);
    weight *= moduli_[i];
  }
  std::vector<Index> out(n);
  for (Index x = 0; x < n; ++x) {
    const auto c = digits(x);
    Index acc = origin;
    for (std::size_t i = 0; i < k; ++i) {
      if (c[i] != 0) acc = target.add(acc, target.scale(static_cast<std::int64_t>(c[i]), steps[i]));
    }
    out[x] = acc;
  }
  return out;
}

bool TensorProduct::vanishes_on_relators(const std::function<Index(Index, Index)>& f,
                                         const FiniteAbelianHeap& target) const {
  if (empty()) return true;
  std::vector<Index> values(pair_count());
  for (Index a = 0; a < gm_; ++a) {
    for (Index b = 0; b < gn_; ++b) values[pair_index(a, b)] = f(a, b);
  }
  const Index e = target.base();
  for (const auto& w : lattice_.hermite().rows()) {
    Integer sum = 0;
    Index acc = e;
    for (std::size_t q = 0; q < w.size(); ++q) {
      if (sgn(w[q]) == 0) continue;
      sum += w[q];
      const Index p = q >= base_ ? static_cast<Index>(q + 1) : static_cast<Index>(q);
      acc = target.add(acc, target.scale(w[q], target.sub(values[p], e)));
    }
    acc = target.add(acc, target.scale(Integer(-sum), target.sub(values[base_], e)));
    if (acc != e) return false;
  }
  return true;
}

bool TensorProduct::preserves_relators(const std::function<SparseRow(Index pair)>& image) const {
  if (empty()) return true;
  std::vector<SparseRow> images(pair_count());
  for (Index p = 0; p < pair_count(); ++p) images[p] = image(p);
  for (const auto& w : lattice_.hermite().rows()) {
    IntVector mapped(pair_count(), 0);
    Integer sum = 0;
    auto push = [&](Index p, const Integer& c) {
      for (const auto& [q, k] : images[p]) mapped[q] += c * static_cast<long>(k);
    };
    for (std::size_t q = 0; q < w.size(); ++q) {
      if (sgn(w[q]) == 0) continue;
      sum += w[q];
      push(q >= base_ ? static_cast<Index>(q + 1) : static_cast<Index>(q), w[q]);
    }
    push(base_, Integer(-sum));
    if (!lattice_.member(reduce_coords(mapped))) return false;
  }
  return true;
}

std::vector<Index> TensorProduct::image_table(const std::function<SparseRow(Index pair)>& image) const {
  const std::size_t n = heap()->size();
  if (n == 0) return {};
  std::vector<SparseRow> images(pair_count());
  for (Index p = 0; p < pair_count(); ++p) images[p] = image(p);
  const std::size_t k = moduli_.size();
  const auto origin = coords_from(representative(0), &images);
  std::vector<std::vector<std::uint64_t>> steps(k);
  std::uint64_t weight = 1;
  for (std::size_t i = k; i-- > 0;) {
    steps[i] = coords_from(representative(static_cast<Index>(weight)), &images);
    for (std::size_t j = 0; j < k; ++j) steps[i][j] = (steps[i][j] + moduli_[j] - origin[j]) % moduli_[j];
    weight *= moduli_[i];
  }
  std::vector<Index> out(n);
  std::vector<std::uint64_t> acc(k);
  for (Index x = 0; x < n; ++x) {
    const auto c = digits(x);
    acc = origin;
    for (std::size_t i = 0; i < k; ++i) {
      if (c[i] == 0) continue;
      for (std::size_t j = 0; j < k; ++j) acc[j] = (acc[j] + c[i] * steps[i][j]) % moduli_[j];
    }
    out[x] = index_from(acc);
  }
  return out;
}

std::vector<Index> TensorProduct::induced_endomorphism(const std::function<SparseRow(Index pair)>& image) const {
  if (!preserves_relators(image)) throw DomainError("map on generator pairs does not preserve the relator lattice");
  return image_table(image);
}

ModulePtr TensorProduct::as_module(const TrussPtr& r, Side side,
                                   const std::function<SparseRow(Index r, Index y)>& act) const {
  const HeapPtr& h = heap();
  const std::size_t n = h->size();
  std::vector<Index> table(r->size() * n);
  for (Index s = 0; s < r->size(); ++s) {
    const auto image = [&](Index p) {
      const Index a = p / static_cast<Index>(gn_), b = p % static_cast<Index>(gn_);
      SparseRow out;
      if (side == Side::Left) {
        for (const auto& [a2, c] : act(s, a)) out.emplace_back(pair_index(a2, b), c);
      } else {
        for (const auto& [b2, c] : act(s, b)) out.emplace_back(pair_index(a, b2), c);
      }
      return out;
    };
    const auto col = induced_endomorphism(image);
    std::copy(col.begin(), col.end(), table.begin() + static_cast<std::ptrdiff_t>(s * n));
  }
  return make_module(FiniteModule(r, h, std::move(table), side));
}

TensorPtr tensor(const ModulePtr& m, const ModulePtr& n, TensorProduct::Options options) {
  return std::make_shared<const TensorProduct>(present(m), present(n), options);
}

// ---------------------------------------------------------------------------
// Balanced maps

ValidationReport check_balanced(const FiniteModule& m, const FiniteModule& n, const FiniteAbelianHeap& h,
                                const std::function<Index(Index, Index)>& f) {
  ValidationReport rep;
  const std::size_t gm = m.size(), gn = n.size();
  std::vector<Index> values(gm * gn);
  for (Index a = 0; a < gm; ++a) {
    for (Index b = 0; b < gn; ++b) values[a * gn + b] = f(a, b);
  }
  std::vector<Index> slice;
  for (Index b = 0; b < gn; ++b) {
    slice.assign(gm, 0);
    for (Index a = 0; a < gm; ++a) slice[a] = values[a * gn + b];
    if (!is_heap_morphism(m.heap(), h, slice)) rep.add("bilinear-left", {b});
  }
  for (Index a = 0; a < gm; ++a) {
    slice.assign(values.begin() + a * gn, values.begin() + (a + 1) * gn);
    if (!is_heap_morphism(n.heap(), h, slice)) rep.add("bilinear-right", {a});
  }
  for (Index t = 0; t < m.truss().size(); ++t) {
    for (Index a = 0; a < gm; ++a) {
      for (Index b = 0; b < gn; ++b) {
        if (values[m.act(t, a) * gn + b] != values[a * gn + n.act(t, b)]) {
          rep.add("balanced", {t, a, b});
        }
      }
    }
  }
  return rep;
}

std::vector<Index> induce_balanced(const TensorProduct& t, const FiniteModule& m, const FiniteModule& n,
                                   const FiniteAbelianHeap& h, const std::function<Index(Index, Index)>& f) {
  const ValidationReport rep = check_balanced(m, n, h, f);
  if (!rep.ok()) {
    const auto& v = rep.violations.front();
    std::string at;
    for (Index i : v.witness) at += (at.empty() ? "" : ",") + std::to_string(i);
    throw DomainError("map is not bilinear and balanced: " + v.law + " at (" + at + ")");
  }
  return t.induce(f, h);
}

ModulePtr tensor_left_module(const TensorProduct& t, const ModulePtr& m_left) {
  return t.as_module(m_left->truss_ptr(), Side::Left,
                     [&](Index r, Index y) { return SparseRow{{m_left->act(r, y), 1}}; });
}

ModulePtr tensor_right_module(const TensorProduct& t, const ModulePtr& n_right) {
  return t.as_module(n_right->truss_ptr(), Side::Right,
                     [&](Index r, Index y) { return SparseRow{{n_right->act(r, y), 1}}; });
}

bool simple_tensors_generate(const TensorProduct& t) {
  const auto& h = *t.heap();
  if (h.empty()) return true;
  std::vector<Index> seed;
  for (Index a = 0; a < t.left_generators(); ++a) {
    for (Index b = 0; b < t.right_generators(); ++b) seed.push_back(t.simple(a, b));
  }
  return generate_subheap(h, seed).size() == h.size();
}

// ---------------------------------------------------------------------------
// Unit isomorphisms

namespace {

// Sum-one row over the generators T ∪ {∗} of T⁺ for an element of T⁺.
SparseRow plus_row(const UnitalExtension& ext, const CoproductElement& z) {
  const AlternatingWord w = ext.coproduct().unfold(z);
  const Index star = static_cast<Index>(ext.base()->size());
  SparseRow row;
  for (std::size_t i = 0; i < w.size(); ++i) {
    row.emplace_back(w[i].summand == 1 ? star : w[i].element, i % 2 == 0 ? 1 : -1);
  }
  return normalize(std::move(row));
}

}  // namespace

UnitIsoReport unit_isos(const ModulePtr& m_right, const ModulePtr& n_left, std::int64_t bound) {
  UnitIsoReport out;
  auto& rep = out.report;
  const TrussPtr& t = m_right->truss_ptr();
  if (!same_truss(t, n_left->truss_ptr())) throw DomainError("unit isomorphisms over different trusses");
  const auto ext = std::make_shared<const UnitalExtension>(t);
  const Index star = static_cast<Index>(t->size());
  const auto& mh = m_right->heap();

  // M ⊗_T T⁺ ≅ M.
  const TensorProduct u(present(m_right), present_unital_extension(t, Side::Left));
  out.tensor_size = u.size();
  std::vector<Index> alpha(mh.size());
  for (Index x = 0; x < mh.size(); ++x) alpha[x] = u.simple(x, star);
  const auto beta_gen = [&](Index x, Index y) { return y == star ? x : m_right->act(y, x); };
  if (!u.vanishes_on_relators(beta_gen, mh)) rep.add("beta-well-defined", {});
  const std::vector<Index> beta = u.induce(beta_gen, mh);
  for (Index x = 0; x < mh.size(); ++x) {
    if (beta[alpha[x]] != x) rep.add("beta-alpha", {x});
  }
  for (Index c = 0; c < u.size(); ++c) {
    if (alpha[beta[c]] != c) rep.add("alpha-beta", {c});
  }
  if (!is_heap_morphism(mh, *u.heap(), alpha)) rep.add("alpha-heap", {});
  const ModulePtr u_right = u.as_module(t, Side::Right, [&](Index s, Index y) {
    return SparseRow{{y == star ? s : t->mul(y, s), 1}};
  });
  if (!is_linear(*m_right, *u_right, alpha)) rep.add("alpha-linear", {});
  const PlusModule mplus = unitalize(m_right, ext);
  const auto ball = ext->ball(bound);
  for (Index x = 0; x < mh.size(); ++x) {
    for (const auto& z : ball) {
      IntVector v(u.pair_count(), 0);
      for (const auto& [y, c] : plus_row(*ext, z)) v[u.pair_index(x, y)] += static_cast<long>(c);
      if (u.index_of(u.class_of(v)) != alpha[mplus.act(z, x)]) {
        rep.add("m⊗z=m·z", {x});
      }
    }
  }

  // Hom_T(T⁺, N) ≅ N through g ↦ g(∗).
  const auto& nh = n_left->heap();
  std::set<Index> points;
  for_each_heap_morphism(t->heap(), nh, [&](const std::vector<Index>& h0) {
    for (Index p = 0; p < nh.size(); ++p) {
      const auto g = [&](const CoproductElement& z) {
        SparseRow terms;
        for (const auto& [y, c] : plus_row(*ext, z)) terms.emplace_back(y == star ? p : h0[y], c);
        return nh.affine_sum(terms);
      };
      bool linear = true;
      for (Index s = 0; s < t->size() && linear; ++s) {
        const CoproductElement es = ext->embed(s);
        for (const auto& z : ball) {
          if (g(ext->multiply(es, z)) != n_left->act(s, g(z))) {
            linear = false;
            break;
          }
        }
      }
      if (!linear) continue;
      ++out.hom_count;
      if (!points.insert(p).second) rep.add("evaluation-injective", {p});
      for (Index s = 0; s < t->size(); ++s) {
        if (h0[s] != n_left->act(s, p)) rep.add("g(t)=t·g(*)", {s, p});
      }
    }
  });
  if (out.hom_count != nh.size()) {
    rep.add("evaluation-bijective", {static_cast<Index>(out.hom_count)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Associativity

namespace {

// Σ c·g(a, b) over the representative of a class of `t`, in `target`.
Index expand_class(const TensorProduct& t, Index cls, const FiniteAbelianHeap& target,
                   const std::function<Index(Index, Index)>& g) {
  const IntVector v = t.representative(cls);
  std::vector<std::pair<Index, Integer>> terms;
  const Index gn = static_cast<Index>(t.right_generators());
  for (Index p = 0; p < v.size(); ++p) {
    if (sgn(v[p]) != 0) terms.emplace_back(g(p / gn, p % gn), v[p]);
  }
  return target.affine_sum(terms);
}

}  // namespace

ValidationReport associator_check(const ModulePtr& a_left, const ModulePtr& a_right, const ModulePtr& b_left,
                                  const ModulePtr& b_right, const ModulePtr& c_left, const ModulePtr& c_right) {
  ValidationReport rep;
  const TensorPtr ab = tensor(a_right, b_left);
  const ModulePtr ab_right = tensor_right_module(*ab, b_right);
  const ModulePtr ab_left = tensor_left_module(*ab, a_left);
  const TensorPtr ab_c = tensor(ab_right, c_left);

  const TensorPtr bc = tensor(b_right, c_left);
  const ModulePtr bc_left = tensor_left_module(*bc, b_left);
  const ModulePtr bc_right = tensor_right_module(*bc, c_right);
  const TensorPtr a_bc = tensor(a_right, bc_left);

  const auto& lhs = *ab_c->heap();
  const auto& rhs = *a_bc->heap();
  const auto phi_gen = [&](Index x, Index c) {
    return expand_class(*ab, x, rhs, [&](Index a, Index b) { return a_bc->simple(a, bc->simple(b, c)); });
  };
  const auto psi_gen = [&](Index a, Index y) {
    return expand_class(*bc, y, lhs, [&](Index b, Index c) { return ab_c->simple(ab->simple(a, b), c); });
  };
  if (!ab_c->vanishes_on_relators(phi_gen, rhs)) rep.add("associator-well-defined", {});
  if (!a_bc->vanishes_on_relators(psi_gen, lhs)) rep.add("associator-inverse-well-defined", {});
  if (!rep.ok()) return rep;
  const auto phi = ab_c->induce(phi_gen, rhs);
  const auto psi = a_bc->induce(psi_gen, lhs);
  for (Index x = 0; x < lhs.size(); ++x) {
    if (psi[phi[x]] != x) rep.add("inverse-left", {x});
  }
  for (Index y = 0; y < rhs.size(); ++y) {
    if (phi[psi[y]] != y) rep.add("inverse-right", {y});
  }
  for (Index a = 0; a < a_right->size(); ++a) {
    for (Index b = 0; b < b_left->size(); ++b) {
      for (Index c = 0; c < c_left->size(); ++c) {
        if (phi[ab_c->simple(ab->simple(a, b), c)] != a_bc->simple(a, bc->simple(b, c))) {
          rep.add("(a⊗b)⊗c ↦ a⊗(b⊗c)", {a, b, c});
        }
      }
    }
  }
  if (!is_linear(*tensor_left_module(*ab_c, ab_left), *tensor_left_module(*a_bc, a_left), phi)) {
    rep.add("associator-left-linear", {});
  }
  if (!is_linear(*tensor_right_module(*ab_c, c_right), *tensor_right_module(*a_bc, bc_right), phi)) {
    rep.add("associator-right-linear", {});
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Hom modules and the adjunction

HomModule hom_module(const ModulePtr& m_left, const ModulePtr& m_right, const ModulePtr& y_right) {
  HomModule out;
  out.maps = hom_modules(*m_right, *y_right);
  const TrussPtr& t = m_left->truss_ptr();
  const std::size_t k = out.maps.size();
  if (k == 0) {
    out.module = empty_module(t, Side::Right);
    return out;
  }
  std::map<std::vector<Index>, Index> lookup;
  for (std::size_t i = 0; i < k; ++i) lookup.emplace(out.maps[i], static_cast<Index>(i));
  const auto& yh = y_right->heap();
  const std::size_t n = m_left->size();
  std::vector<std::string> labels(k);
  std::vector<Index> add(k * k);
  std::vector<Index> f(n);
  for (std::size_t i = 0; i < k; ++i) {
    labels[i] = map_label(yh, out.maps[i]);
    for (std::size_t j = 0; j < k; ++j) {
      for (Index x = 0; x < n; ++x) f[x] = yh.add(yh.sub(out.maps[i][x], out.maps[0][x]), out.maps[j][x]);
      add[i * k + j] = lookup.at(f);
    }
  }
  auto heap = make_heap(FiniteAbelianHeap(std::move(labels), 0, std::move(add)));
  std::vector<Index> act(t->size() * k);
  for (Index s = 0; s < t->size(); ++s) {
    for (std::size_t i = 0; i < k; ++i) {
      for (Index x = 0; x < n; ++x) f[x] = out.maps[i][m_left->act(s, x)];
      const auto it = lookup.find(f);
      if (it == lookup.end()) throw DomainError("(f·t)(m) = f(t·m) is not linear; M is not a bimodule");
      act[s * k + i] = it->second;
    }
  }
  out.module = make_module(FiniteModule(t, heap, std::move(act), Side::Right));
  return out;
}

namespace {

ValidationReport bimodule_report(const FiniteModule& left, const FiniteModule& right) {
  ValidationReport rep;
  for (Index t = 0; t < left.truss().size(); ++t) {
    for (Index s = 0; s < right.truss().size(); ++s) {
      for (Index m = 0; m < left.size(); ++m) {
        if (right.act(s, left.act(t, m)) != left.act(t, right.act(s, m))) {
          rep.add("bimodule", {t, s, m});
        }
      }
    }
  }
  return rep;
}

std::optional<Index> find_map(const std::vector<std::vector<Index>>& maps, const std::vector<Index>& f) {
  const auto it = std::find(maps.begin(), maps.end(), f);
  if (it == maps.end()) return std::nullopt;
  return static_cast<Index>(it - maps.begin());
}

}  // namespace

ValidationReport adjunction_check(const ModulePtr& x_right, const ModulePtr& y_right, const ModulePtr& m_left,
                                  const ModulePtr& m_right) {
  ValidationReport rep = bimodule_report(*m_left, *m_right);
  if (!rep.ok()) return rep;
  const auto& mh = m_left->heap();

  // η_X: X → Hom_S(M, X ⊗ M).
  const TensorPtr xm = tensor(x_right, m_left);
  const ModulePtr xm_right = tensor_right_module(*xm, m_right);
  const HomModule h1 = hom_module(m_left, m_right, xm_right);
  std::vector<Index> eta(x_right->size());
  for (Index x = 0; x < x_right->size(); ++x) {
    std::vector<Index> f(mh.size());
    for (Index m = 0; m < mh.size(); ++m) f[m] = xm->simple(x, m);
    const auto idx = find_map(h1.maps, f);
    if (!idx) {
      rep.add("eta-into-hom", {x});
      return rep;
    }
    eta[x] = *idx;
  }
  if (!is_linear(*x_right, *h1.module, eta)) rep.add("eta-linear", {});

  // ε_Y: Hom_S(M, Y) ⊗ M → Y.
  const HomModule h2 = hom_module(m_left, m_right, y_right);
  const TensorPtr u = tensor(h2.module, m_left);
  const auto& yh = y_right->heap();
  const auto eps_gen = [&](Index f, Index m) { return h2.maps[f][m]; };
  if (!u->vanishes_on_relators(eps_gen, yh)) rep.add("epsilon-well-defined", {});
  const auto eps = u->induce(eps_gen, yh);
  if (!is_linear(*tensor_right_module(*u, m_right), *y_right, eps)) rep.add("epsilon-linear", {});

  // ε_{X⊗M} ∘ (η_X ⊗ M) = id.
  const TensorPtr u1 = tensor(h1.module, m_left);
  const auto& xmh = *xm->heap();
  const auto eps1_gen = [&](Index f, Index m) { return h1.maps[f][m]; };
  const auto eta_m_gen = [&](Index x, Index m) { return u1->simple(eta[x], m); };
  if (!u1->vanishes_on_relators(eps1_gen, xmh) || !xm->vanishes_on_relators(eta_m_gen, *u1->heap())) {
    rep.add("triangle-well-defined", {});
    return rep;
  }
  const auto eps1 = u1->induce(eps1_gen, xmh);
  const auto eta_m = xm->induce(eta_m_gen, *u1->heap());
  for (Index c = 0; c < xmh.size(); ++c) {
    if (eps1[eta_m[c]] != c) rep.add("triangle-left", {c});
  }

  // Hom(M, ε_Y) ∘ η_{Hom(M,Y)} = id.
  for (std::size_t f = 0; f < h2.maps.size(); ++f) {
    for (Index m = 0; m < mh.size(); ++m) {
      if (eps[u->simple(static_cast<Index>(f), m)] != h2.maps[f][m]) {
        rep.add("triangle-right", {static_cast<Index>(f), m});
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Tensor as a coequalizer of heap tensors

ValidationReport tensor_as_coequalizer_check(const ModulePtr& m_right, const ModulePtr& n_left,
                                             std::size_t max_triple) {
  ValidationReport rep;
  const TrussPtr& t = m_right->truss_ptr();
  const TrussPtr star = truss_from_ring(1);
  const std::size_t triple = m_right->size() * t->size() * n_left->size();
  if (triple > max_triple) {
    throw SizeLimitError("M × T × N has " + std::to_string(triple) + " triples, above " + std::to_string(max_triple));
  }
  const ModulePtr m0 = trivial_module(star, m_right->heap_ptr(), Side::Right);
  const ModulePtr n0 = trivial_module(star, n_left->heap_ptr(), Side::Left);
  const TensorPtr mt = tensor(m0, trivial_module(star, t->heap_ptr(), Side::Left));
  const ModulePtr mt_right = trivial_module(star, mt->heap(), Side::Right);
  const TensorPtr mtn = tensor(mt_right, n0);
  const TensorPtr mn = tensor(m0, n0);
  const auto& mnh = *mn->heap();
  const auto& mtnh = *mtn->heap();

  const auto via = [&](bool act_left) {
    const auto gen = [&, act_left](Index x, Index n) {
      return expand_class(*mt, x, mnh, [&](Index m, Index s) {
        return act_left ? mn->simple(m_right->act(s, m), n) : mn->simple(m, n_left->act(s, n));
      });
    };
    if (!mtn->vanishes_on_relators(gen, mnh)) rep.add(act_left ? "m·t⊗n well defined" : "m⊗t·n well defined", {});
    return mtn->induce(gen, mnh);
  };
  const ModulePtr mtn_mod = trivial_module(star, mtn->heap(), Side::Left);
  const ModulePtr mn_mod = trivial_module(star, mn->heap(), Side::Left);
  const ModuleMorphism phi{mtn_mod, mn_mod, via(true)};
  const ModuleMorphism psi{mtn_mod, mn_mod, via(false)};
  if (!rep.ok()) return rep;
  if (mtnh.empty() || mnh.empty()) return rep;
  const QuotientModule coeq = coequalizer(phi, psi, mnh.base());

  const TensorPtr over_t = tensor(m_right, n_left);
  const auto& th = *over_t->heap();
  const auto kappa_gen = [&](Index m, Index n) { return over_t->simple(m, n); };
  if (!mn->vanishes_on_relators(kappa_gen, th)) {
    rep.add("comparison-well-defined", {});
    return rep;
  }
  const auto kappa = mn->induce(kappa_gen, th);
  std::vector<Index> bar(coeq.classes.size());
  std::vector<bool> hit(th.size(), false);
  for (std::size_t c = 0; c < coeq.classes.size(); ++c) {
    const auto& cls = coeq.classes[c];
    bar[c] = kappa[cls.front()];
    for (Index x : cls) {
      if (kappa[x] != bar[c]) rep.add("comparison-constant-on-classes", {x});
    }
    if (hit[bar[c]]) rep.add("comparison-injective", {bar[c]});
    hit[bar[c]] = true;
  }
  for (Index y = 0; y < th.size(); ++y) {
    if (!hit[y]) rep.add("comparison-surjective", {y});
  }
  return rep;
}

}  // namespace trusskit
