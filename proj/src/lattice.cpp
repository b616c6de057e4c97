#include "trusskit/lattice.hpp"

#include <algorithm>
#include <limits>
#include <utility>

namespace trusskit {

std::uint64_t mod_reduce(const Integer& k, std::uint64_t m) {
  Integer r;
  mpz_fdiv_r_ui(r.get_mpz_t(), k.get_mpz_t(), static_cast<unsigned long>(m));
  return r.get_ui();
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw SizeLimitError("integer overflow in tail arithmetic");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw SizeLimitError("integer overflow in tail arithmetic");
  return r;
}

IntMatrix identity_matrix(std::size_t n) {
  IntMatrix m(n, IntVector(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
  if (a.empty()) return {};
  const std::size_t inner = b.size();
  const std::size_t cols = b.empty() ? 0 : b[0].size();
  IntMatrix c(a.size(), IntVector(cols, 0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != inner) throw DomainError("matrix shape mismatch");
    for (std::size_t k = 0; k < inner; ++k) {
      if (sgn(a[i][k]) == 0) continue;
      for (std::size_t j = 0; j < cols; ++j) c[i][j] += a[i][k] * b[k][j];
    }
  }
  return c;
}

Integer determinant(const IntMatrix& input) {
  const std::size_t n = input.size();
  if (n == 0) return 1;
  IntMatrix a = input;
  Integer sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (sgn(a[k][k]) == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && sgn(a[swap_row][k]) == 0) ++swap_row;
      if (swap_row == n) return 0;
      std::swap(a[k], a[swap_row]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
      }
    }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

// ---------------------------------------------------------------------------
// Hermite basis

HermiteBasis::HermiteBasis(std::size_t dim) : dim_(dim), by_pivot_(dim) {}

void HermiteBasis::insert(IntVector row) {
  if (row.size() != dim_) throw DomainError("lattice row has wrong length");
  finalized_ = false;
  std::vector<std::size_t> touched;
  for (std::size_t c = 0; c < dim_; ++c) {
    if (sgn(row[c]) == 0) continue;
    IntVector& p = by_pivot_[c];
    if (p.empty()) {
      if (sgn(row[c]) < 0) {
        for (std::size_t j = c; j < dim_; ++j) row[j] = -row[j];
      }
      p = std::move(row);
      ++count_;
      touched.push_back(c);
      break;
    }
    if (mpz_divisible_p(row[c].get_mpz_t(), p[c].get_mpz_t())) {
      Integer q = row[c] / p[c];
      for (std::size_t j = c; j < dim_; ++j) {
        if (sgn(p[j]) != 0) row[j] -= q * p[j];
      }
      continue;
    }
    Integer g, s, t;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), p[c].get_mpz_t(), row[c].get_mpz_t());
    Integer ag = p[c] / g;
    Integer bg = row[c] / g;
    IntVector merged(dim_, 0);
    for (std::size_t j = c; j < dim_; ++j) {
      merged[j] = s * p[j] + t * row[j];
      row[j] = ag * row[j] - bg * p[j];
    }
    p = std::move(merged);
    touched.push_back(c);
  }
  // Keep modified pivot rows reduced against later pivots to limit growth.
  for (std::size_t c : touched) {
    IntVector& r = by_pivot_[c];
    for (std::size_t k = c + 1; k < dim_; ++k) {
      const IntVector& p = by_pivot_[k];
      if (p.empty() || sgn(r[k]) == 0) continue;
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), r[k].get_mpz_t(), p[k].get_mpz_t());
      if (sgn(q) == 0) continue;
      for (std::size_t j = k; j < dim_; ++j) {
        if (sgn(p[j]) != 0) r[j] -= q * p[j];
      }
    }
  }
}

void HermiteBasis::insert_sparse(const SparseRow& row) {
  bool any = false;
  for (const auto& [col, coeff] : row) {
    if (coeff != 0) any = true;
    if (col >= dim_) throw DomainError("sparse lattice row column out of range");
  }
  if (!any) return;
  IntVector dense(dim_, 0);
  for (const auto& [col, coeff] : row) dense[col] += static_cast<long>(coeff);
  insert(std::move(dense));
}

void HermiteBasis::finalize() {
  for (std::size_t c = 0; c < dim_; ++c) {
    const IntVector& p = by_pivot_[c];
    if (p.empty()) continue;
    for (std::size_t r = 0; r < c; ++r) {
      IntVector& row = by_pivot_[r];
      if (row.empty() || sgn(row[c]) == 0) continue;
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), row[c].get_mpz_t(), p[c].get_mpz_t());
      if (sgn(q) == 0) continue;
      for (std::size_t j = c; j < dim_; ++j) {
        if (sgn(p[j]) != 0) row[j] -= q * p[j];
      }
    }
  }
  finalized_ = true;
}

IntVector HermiteBasis::reduce(IntVector v) const {
  if (!finalized_) throw DomainError("Hermite basis used before finalize()");
  if (v.size() != dim_) throw DomainError("vector has wrong length");
  for (std::size_t c = 0; c < dim_; ++c) {
    const IntVector& p = by_pivot_[c];
    if (p.empty() || sgn(v[c]) == 0) continue;
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), v[c].get_mpz_t(), p[c].get_mpz_t());
    if (sgn(q) == 0) continue;
    for (std::size_t j = c; j < dim_; ++j) {
      if (sgn(p[j]) != 0) v[j] -= q * p[j];
    }
  }
  return v;
}

bool HermiteBasis::contains(const IntVector& v) const {
  IntVector r = reduce(v);
  return std::all_of(r.begin(), r.end(), [](const Integer& x) { return sgn(x) == 0; });
}

IntMatrix HermiteBasis::rows() const {
  IntMatrix out;
  for (const auto& p : by_pivot_) {
    if (!p.empty()) out.push_back(p);
  }
  return out;
}

std::vector<std::size_t> HermiteBasis::pivot_columns() const {
  std::vector<std::size_t> cols;
  for (std::size_t c = 0; c < dim_; ++c) {
    if (!by_pivot_[c].empty()) cols.push_back(c);
  }
  return cols;
}

IntMatrix hermite_nf(const IntMatrix& a, std::size_t cols) {
  HermiteBasis basis(cols);
  for (const auto& row : a) basis.insert(row);
  basis.finalize();
  return basis.rows();
}

// ---------------------------------------------------------------------------
// Smith normal form

namespace {

struct SmithWork {
  IntMatrix S, U, V, Vi;
  std::size_t m, n;

  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    std::swap(S[i], S[j]);
    std::swap(U[i], U[j]);
  }
  void swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (auto& row : S) std::swap(row[i], row[j]);
    for (auto& row : V) std::swap(row[i], row[j]);
    std::swap(Vi[i], Vi[j]);
  }
  // row_i -= q * row_t
  void row_sub(std::size_t i, std::size_t t, const Integer& q) {
    for (std::size_t j = 0; j < n; ++j) {
      if (sgn(S[t][j]) != 0) S[i][j] -= q * S[t][j];
    }
    for (std::size_t j = 0; j < m; ++j) {
      if (sgn(U[t][j]) != 0) U[i][j] -= q * U[t][j];
    }
  }
  // col_j -= q * col_t ; inverse update row_t(Vi) += q * row_j(Vi)
  void col_sub(std::size_t j, std::size_t t, const Integer& q) {
    for (std::size_t i = 0; i < m; ++i) {
      if (sgn(S[i][t]) != 0) S[i][j] -= q * S[i][t];
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (sgn(V[i][t]) != 0) V[i][j] -= q * V[i][t];
    }
    for (std::size_t k = 0; k < n; ++k) {
      if (sgn(Vi[j][k]) != 0) Vi[t][k] += q * Vi[j][k];
    }
  }
  void negate_row(std::size_t t) {
    for (auto& x : S[t]) x = -x;
    for (auto& x : U[t]) x = -x;
  }
};

}  // namespace

SmithForm smith_nf(const IntMatrix& a, std::size_t cols) {
  SmithWork w;
  w.m = a.size();
  w.n = cols;
  w.S = a;
  for (const auto& row : w.S) {
    if (row.size() != cols) throw DomainError("matrix shape mismatch");
  }
  w.U = identity_matrix(w.m);
  w.V = identity_matrix(w.n);
  w.Vi = identity_matrix(w.n);
  const std::size_t lim = std::min(w.m, w.n);

  for (std::size_t t = 0; t < lim; ++t) {
    // Smallest nonzero entry of the trailing block becomes the pivot.
    auto move_min_to_pivot = [&](bool whole_block) -> bool {
      bool found = false;
      std::size_t bi = t, bj = t;
      Integer best;
      for (std::size_t i = t; i < w.m; ++i) {
        for (std::size_t j = t; j < w.n; ++j) {
          if (!whole_block && i != t && j != t) continue;
          if (sgn(w.S[i][j]) == 0) continue;
          Integer v = abs(w.S[i][j]);
          if (!found || v < best) {
            found = true;
            best = v;
            bi = i;
            bj = j;
          }
        }
      }
      if (!found) return false;
      w.swap_rows(t, bi);
      w.swap_cols(t, bj);
      return true;
    };
    if (!move_min_to_pivot(true)) break;

    for (;;) {
      bool clean = true;
      for (std::size_t i = t + 1; i < w.m; ++i) {
        if (sgn(w.S[i][t]) == 0) continue;
        Integer q = w.S[i][t] / w.S[t][t];
        if (sgn(q) != 0) w.row_sub(i, t, q);
        if (sgn(w.S[i][t]) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < w.n; ++j) {
        if (sgn(w.S[t][j]) == 0) continue;
        Integer q = w.S[t][j] / w.S[t][t];
        if (sgn(q) != 0) w.col_sub(j, t, q);
        if (sgn(w.S[t][j]) != 0) clean = false;
      }
      if (!clean) {
        move_min_to_pivot(false);
        continue;
      }
      bool divisible = true;
      for (std::size_t i = t + 1; i < w.m && divisible; ++i) {
        for (std::size_t j = t + 1; j < w.n; ++j) {
          if (!mpz_divisible_p(w.S[i][j].get_mpz_t(), w.S[t][t].get_mpz_t())) {
            // row_t += row_i brings the offending entry into row t.
            w.row_sub(t, i, Integer(-1));
            divisible = false;
            break;
          }
        }
      }
      if (divisible) break;
    }
    if (sgn(w.S[t][t]) < 0) w.negate_row(t);
  }

  SmithForm out;
  out.diagonal.reserve(lim);
  for (std::size_t i = 0; i < lim; ++i) out.diagonal.push_back(w.S[i][i]);
  out.S = std::move(w.S);
  out.U = std::move(w.U);
  out.V = std::move(w.V);
  out.V_inverse = std::move(w.Vi);
  return out;
}

// ---------------------------------------------------------------------------
// IntegerLattice

IntegerLattice IntegerLattice::from_rows(const IntMatrix& rows, std::size_t dim) {
  HermiteBasis basis(dim);
  for (const auto& row : rows) basis.insert(row);
  basis.finalize();
  return from_basis(std::move(basis));
}

IntegerLattice IntegerLattice::from_basis(HermiteBasis basis) {
  basis.finalize();
  IntegerLattice lat;
  lat.hnf_ = std::move(basis);
  const std::size_t dim = lat.hnf_.dim();
  lat.smith_ = smith_nf(lat.hnf_.rows(), dim);
  const std::size_t r = lat.hnf_.rank();
  for (std::size_t i = 0; i < dim; ++i) {
    if (i < r) {
      const Integer& d = lat.smith_.diagonal[i];
      if (d == 1) continue;
      lat.moduli_.push_back(d);
    } else {
      lat.moduli_.push_back(0);
    }
    lat.positions_.push_back(i);
  }
  return lat;
}

bool IntegerLattice::quotient_finite() const { return rank() == dim(); }

IntVector IntegerLattice::coordinates(const IntVector& v) const {
  if (v.size() != dim()) throw DomainError("vector has wrong length");
  IntVector c(positions_.size(), 0);
  for (std::size_t k = 0; k < positions_.size(); ++k) {
    const std::size_t col = positions_[k];
    Integer acc = 0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (sgn(v[j]) != 0) acc += v[j] * smith_.V[j][col];
    }
    if (sgn(moduli_[k]) != 0) mpz_fdiv_r(acc.get_mpz_t(), acc.get_mpz_t(), moduli_[k].get_mpz_t());
    c[k] = std::move(acc);
  }
  return c;
}

IntVector IntegerLattice::representative(const IntVector& c) const {
  if (c.size() != positions_.size()) throw DomainError("coordinate vector has wrong length");
  IntVector x(dim(), 0);
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (sgn(c[k]) == 0) continue;
    const IntVector& row = smith_.V_inverse[positions_[k]];
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (sgn(row[j]) != 0) x[j] += c[k] * row[j];
    }
  }
  return x;
}

}  // namespace trusskit
