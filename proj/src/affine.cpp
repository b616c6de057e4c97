#include "trusskit/affine.hpp"

#include <sstream>

namespace trusskit {

AffineVector AffineVector::generator(Index x) {
  AffineVector v;
  v.coeffs_[x] = 1;
  return v;
}

AffineVector AffineVector::from_coefficients(std::map<Index, Integer> coeffs) {
  Integer total = 0;
  AffineVector v;
  for (auto& [x, c] : coeffs) {
    total += c;
    if (c != 0) v.coeffs_.emplace(x, std::move(c));
  }
  if (total != 1) throw DomainError("affine vector coefficients must sum to 1");
  return v;
}

Integer AffineVector::coefficient(Index x) const {
  auto it = coeffs_.find(x);
  return it == coeffs_.end() ? Integer(0) : it->second;
}

AffineVector bracket(const AffineVector& a, const AffineVector& b, const AffineVector& c) {
  AffineVector out = a;
  auto accumulate = [&](const AffineVector& v, int sign) {
    for (const auto& [x, k] : v.coeffs_) {
      Integer& slot = out.coeffs_[x];
      if (sign > 0) {
        slot += k;
      } else {
        slot -= k;
      }
      if (slot == 0) out.coeffs_.erase(x);
    }
  };
  accumulate(b, -1);
  accumulate(c, +1);
  return out;
}

std::string AffineVector::to_string(const std::vector<std::string>& labels) const {
  std::ostringstream os;
  os << "affine {";
  bool first = true;
  for (const auto& [x, c] : coeffs_) {
    if (!first) os << ", ";
    first = false;
    os << (x < labels.size() ? labels[x] : std::to_string(x)) << ":" << c.get_str();
  }
  os << "}";
  return os.str();
}

AffineVector reduce_word(std::span<const Index> word) {
  if (word.size() % 2 == 0) throw DomainError("free heap words have odd length");
  std::map<Index, Integer> coeffs;
  for (std::size_t i = 0; i < word.size(); ++i) coeffs[word[i]] += (i % 2 == 0) ? 1 : -1;
  return AffineVector::from_coefficients(std::move(coeffs));
}

// ---------------------------------------------------------------------------
// HeapCoproduct

HeapCoproduct::HeapCoproduct(std::vector<HeapPtr> summands, std::vector<Index> bases)
    : summands_(std::move(summands)), bases_(std::move(bases)) {
  if (summands_.empty()) throw DomainError("coproduct needs at least one summand");
  if (bases_.empty()) bases_.assign(summands_.size(), 0);
  if (bases_.size() != summands_.size()) throw DomainError("one base per summand");
  for (std::size_t i = 0; i < summands_.size(); ++i) {
    if (summands_[i]->empty()) throw DomainError("coproduct summands must be non-empty");
    if (bases_[i] >= summands_[i]->size()) throw DomainError("summand base out of range");
  }
}

CoproductElement HeapCoproduct::base_point() const {
  return CoproductElement{bases_, std::vector<std::int64_t>(arity() - 1, 0)};
}

CoproductElement HeapCoproduct::inject(std::size_t i, Index m) const { return fold(AlternatingWord{Letter{i, m}}); }

CoproductElement HeapCoproduct::bracket(const CoproductElement& a, const CoproductElement& b,
                                        const CoproductElement& c) const {
  CoproductElement out;
  out.parts.resize(arity());
  out.tails.resize(arity() - 1);
  for (std::size_t i = 0; i < arity(); ++i) out.parts[i] = summands_[i]->bracket(a.parts[i], b.parts[i], c.parts[i]);
  for (std::size_t j = 0; j + 1 < arity(); ++j) {
    out.tails[j] = checked_add(checked_add(a.tails[j], -b.tails[j]), c.tails[j]);
  }
  return out;
}

CoproductElement HeapCoproduct::affine_sum(
    const std::vector<std::pair<CoproductElement, std::int64_t>>& terms) const {
  std::int64_t total = 0;
  std::vector<Index> diff(arity());
  for (std::size_t i = 0; i < arity(); ++i) diff[i] = summands_[i]->base();
  std::vector<std::int64_t> tails(arity() - 1, 0);
  for (const auto& [x, w] : terms) {
    total = checked_add(total, w);
    for (std::size_t i = 0; i < arity(); ++i) {
      const auto& m = *summands_[i];
      diff[i] = m.add(diff[i], m.scale(w, m.sub(x.parts[i], bases_[i])));
    }
    for (std::size_t j = 0; j + 1 < arity(); ++j) tails[j] = checked_add(tails[j], checked_mul(w, x.tails[j]));
  }
  if (total != 1) throw DomainError("affine combination coefficients must sum to 1");
  CoproductElement out{std::vector<Index>(arity()), std::move(tails)};
  for (std::size_t i = 0; i < arity(); ++i) out.parts[i] = summands_[i]->add(bases_[i], diff[i]);
  return out;
}

CoproductElement HeapCoproduct::fold(const WeightedWord& w) const {
  // Accumulate m ⊖ e_i in the stored retract of each summand, then shift by e_i.
  std::vector<Index> diff(arity());
  for (std::size_t i = 0; i < arity(); ++i) diff[i] = summands_[i]->base();
  std::vector<std::int64_t> tails(arity() - 1, 0);
  std::int64_t total = 0;
  for (const auto& [letter, weight] : w) {
    if (letter.summand >= arity() || letter.element >= summands_[letter.summand]->size()) {
      throw DomainError("letter outside the coproduct summands");
    }
    total = checked_add(total, weight);
    const auto& m = *summands_[letter.summand];
    diff[letter.summand] = m.add(diff[letter.summand], m.scale(weight, m.sub(letter.element, bases_[letter.summand])));
    for (std::size_t j = 0; j < letter.summand; ++j) tails[j] = checked_add(tails[j], weight);
  }
  if (total != 1) throw DomainError("word weights must sum to 1");
  CoproductElement out{std::vector<Index>(arity()), std::move(tails)};
  for (std::size_t i = 0; i < arity(); ++i) out.parts[i] = summands_[i]->add(bases_[i], diff[i]);
  return out;
}

CoproductElement HeapCoproduct::fold(const AlternatingWord& w) const {
  if (w.size() % 2 == 0) throw DomainError("alternating words have odd length");
  WeightedWord weighted;
  weighted.reserve(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) weighted.emplace_back(w[i], i % 2 == 0 ? 1 : -1);
  return fold(weighted);
}

AlternatingWord HeapCoproduct::unfold(const CoproductElement& x) const {
  const std::size_t k = arity();
  AlternatingWord w;
  w.push_back(Letter{0, x.parts[0]});
  for (std::size_t i = 1; i < k; ++i) {
    const auto& m = *summands_[i];
    w.push_back(Letter{i, m.bracket(bases_[i], x.parts[i], bases_[i])});
    w.push_back(Letter{i, bases_[i]});
  }
  for (std::size_t i = 1; i < k; ++i) {
    const std::int64_t next = i + 1 < k ? x.tails[i] : 0;
    const std::int64_t c = checked_add(x.tails[i - 1], -next);
    const Letter head{0, bases_[0]}, here{i, bases_[i]};
    for (std::int64_t r = 0; r < (c < 0 ? -c : c); ++r) {
      w.push_back(c > 0 ? head : here);
      w.push_back(c > 0 ? here : head);
    }
  }
  return w;
}

CoproductElement HeapCoproduct::map_letters(const CoproductElement& x,
                                            const std::function<Letter(const Letter&)>& f) const {
  AlternatingWord w = unfold(x);
  for (auto& letter : w) letter = f(letter);
  return fold(w);
}

bool HeapCoproduct::is_valid(const CoproductElement& x) const {
  if (x.parts.size() != arity() || x.tails.size() + 1 != arity()) return false;
  for (std::size_t i = 0; i < arity(); ++i) {
    if (x.parts[i] >= summands_[i]->size()) return false;
  }
  return true;
}

std::vector<CoproductElement> HeapCoproduct::ball(std::int64_t bound, std::size_t limit) const {
  if (bound < 0) throw DomainError("negative tail bound");
  const std::size_t k = arity();
  double estimate = 1;
  for (const auto& s : summands_) estimate *= static_cast<double>(s->size());
  for (std::size_t j = 0; j + 1 < k; ++j) estimate *= static_cast<double>(2 * bound + 1);
  if (estimate > static_cast<double>(limit)) throw SizeLimitError("coproduct ball exceeds the size guard");

  std::vector<CoproductElement> out;
  out.reserve(static_cast<std::size_t>(estimate));
  std::vector<std::int64_t> tails(k - 1, -bound);
  for (;;) {
    std::vector<Index> parts(k, 0);
    for (;;) {
      out.push_back(CoproductElement{parts, tails});
      std::size_t i = k;
      while (i > 0) {
        --i;
        if (++parts[i] < summands_[i]->size()) break;
        parts[i] = 0;
        if (i == 0) goto parts_done;
      }
    }
  parts_done:
    std::size_t j = tails.size();
    while (j > 0) {
      --j;
      if (++tails[j] <= bound) break;
      tails[j] = -bound;
      if (j == 0) return out;
    }
    if (tails.empty()) return out;
  }
}

std::string HeapCoproduct::format(const CoproductElement& x) const {
  std::ostringstream os;
  os << "cop (";
  for (std::size_t i = 0; i < x.parts.size(); ++i) {
    if (i) os << ",";
    os << summands_[i]->label(x.parts[i]);
  }
  os << " |";
  for (std::size_t j = 0; j < x.tails.size(); ++j) os << (j ? "," : " ") << x.tails[j];
  os << ")";
  return os.str();
}

std::int64_t tail_length(const CoproductElement& x) {
  if (x.tails.size() != 1) throw DomainError("tail length is defined on binary coproducts");
  return x.tails[0];
}

LeftNestedElement to_left_nested(const HeapCoproduct& flat, const CoproductElement& x) {
  const std::size_t k = flat.arity();
  if (k < 2) throw DomainError("re-bracketing needs at least two summands");
  LeftNestedElement out;
  out.tail = x.tails[k - 2];
  out.last = x.parts[k - 1];
  out.inner.parts.assign(x.parts.begin(), x.parts.end() - 1);
  for (std::size_t j = 0; j + 2 < k; ++j) out.inner.tails.push_back(checked_add(x.tails[j], -out.tail));
  return out;
}

CoproductElement from_left_nested(const HeapCoproduct& flat, const LeftNestedElement& x) {
  const std::size_t k = flat.arity();
  if (k < 2) throw DomainError("re-bracketing needs at least two summands");
  CoproductElement out;
  out.parts = x.inner.parts;
  out.parts.push_back(x.last);
  for (std::size_t j = 0; j + 2 < k; ++j) out.tails.push_back(checked_add(x.inner.tails[j], x.tail));
  out.tails.push_back(x.tail);
  return out;
}

ValidationReport check_iso_direct(const HeapPtr& m, const HeapPtr& n, std::int64_t bound) {
  ValidationReport rep;
  const HeapCoproduct cop({m, n});
  for (std::size_t side = 0; side < 2; ++side) {
    const auto& h = cop.summand(side);
    std::vector<CoproductElement> image;
    for (Index a = 0; a < h.size(); ++a) image.push_back(cop.inject(side, a));
    for (Index a = 0; a < h.size(); ++a) {
      for (Index b = 0; b < h.size(); ++b) {
        if (a != b && image[a] == image[b]) rep.add("injection injective", {static_cast<Index>(side), a, b});
        for (Index c = 0; c < h.size(); ++c) {
          if (cop.bracket(image[a], image[b], image[c]) != image[h.bracket(a, b, c)]) {
            rep.add("injection is a heap morphism", {static_cast<Index>(side), a, b, c});
          }
        }
      }
    }
  }
  for (Index a = 0; a < m->size(); ++a) {
    for (Index b = 0; b < n->size(); ++b) {
      if (cop.inject(0, a) == cop.inject(1, b)) rep.add("injections disjoint", {a, b});
    }
  }
  // Componentwise arithmetic in G(M;e_M) × G(N;e_N) × Z, computed in the
  // product of the two retracts.
  const FiniteAbelianHeap gm = m->rebased(cop.bases()[0]), gn = n->rebased(cop.bases()[1]);
  const auto ball = cop.ball(bound);
  for (std::size_t i = 0; i < ball.size(); ++i) {
    const auto& x = ball[i];
    if (cop.fold(cop.unfold(x)) != x) rep.add("fold of unfold", {static_cast<Index>(i)});
  }
  for (std::size_t i = 0; i < ball.size(); ++i) {
    for (std::size_t j = 0; j < ball.size(); ++j) {
      for (std::size_t l = 0; l < ball.size(); ++l) {
        const auto& x = ball[i];
        const auto& y = ball[j];
        const auto& w = ball[l];
        const CoproductElement got = cop.bracket(x, y, w);
        const Index pm = gm.add(gm.sub(x.parts[0], y.parts[0]), w.parts[0]);
        const Index pn = gn.add(gn.sub(x.parts[1], y.parts[1]), w.parts[1]);
        const std::int64_t z = x.tails[0] - y.tails[0] + w.tails[0];
        if (got.parts[0] != pm || got.parts[1] != pn || got.tails[0] != z) {
          rep.add("componentwise bracket", {static_cast<Index>(i), static_cast<Index>(j), static_cast<Index>(l)});
        }
      }
    }
  }
  return rep;
}

}  // namespace trusskit
