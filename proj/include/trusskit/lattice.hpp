#pragma once

#include <cstddef>
#include <vector>

#include "trusskit/core.hpp"

namespace trusskit {

using IntVector = std::vector<Integer>;
using IntMatrix = std::vector<IntVector>;  // row-major

IntMatrix identity_matrix(std::size_t n);
IntMatrix multiply(const IntMatrix& a, const IntMatrix& b);
// Determinant by fraction-free elimination (square input).
Integer determinant(const IntMatrix& a);

// Row-style Hermite basis maintained incrementally.  Invariant after
// `finalize`: rows sorted by pivot column, pivots positive, entries above a
// pivot reduced into [0, pivot).  The row space equals the span of every
// inserted vector.
class HermiteBasis {
 public:
  explicit HermiteBasis(std::size_t dim = 0);

  std::size_t dim() const { return dim_; }
  std::size_t rank() const { return count_; }

  void insert(IntVector row);
  void insert_sparse(const SparseRow& row);
  void finalize();

  // Reduces `v` by the basis; the result is the canonical representative of
  // v + L and is zero iff v ∈ L.  Requires `finalize`.
  IntVector reduce(IntVector v) const;
  bool contains(const IntVector& v) const;

  // Basis rows ordered by pivot column.
  IntMatrix rows() const;
  std::vector<std::size_t> pivot_columns() const;

 private:
  std::size_t dim_;
  std::size_t count_ = 0;
  std::vector<IntVector> by_pivot_;  // empty vector where no pivot
  bool finalized_ = true;
};

IntMatrix hermite_nf(const IntMatrix& a, std::size_t cols);

struct SmithForm {
  IntMatrix S;  // m x n, diagonal
  IntMatrix U;  // m x m unimodular
  IntMatrix V;  // n x n unimodular, U * A * V = S
  IntMatrix V_inverse;
  std::vector<Integer> diagonal;  // min(m,n) entries, d_1 | d_2 | ..., zeros last
};

SmithForm smith_nf(const IntMatrix& a, std::size_t cols);

// Sublattice L of Z^dim with both normal forms.  Built once; immutable.
class IntegerLattice {
 public:
  IntegerLattice() = default;
  static IntegerLattice from_rows(const IntMatrix& rows, std::size_t dim);
  static IntegerLattice from_basis(HermiteBasis basis);

  std::size_t dim() const { return hnf_.dim(); }
  std::size_t rank() const { return hnf_.rank(); }
  const HermiteBasis& hermite() const { return hnf_; }
  const SmithForm& smith() const { return smith_; }

  bool member(const IntVector& v) const { return hnf_.contains(v); }

  // Invariant factors of Z^dim / L: one entry per non-trivial cyclic factor,
  // 0 for each free factor.
  const std::vector<Integer>& quotient_invariants() const { return moduli_; }
  bool quotient_finite() const;
  // SNF column positions of the non-trivial factors, parallel to
  // quotient_invariants().
  const std::vector<std::size_t>& quotient_positions() const { return positions_; }

  // Canonical coordinates of v + L in ⊕ Z/d_i ⊕ Z^free.
  IntVector coordinates(const IntVector& v) const;
  // A vector whose coordinates are `c`.
  IntVector representative(const IntVector& c) const;

 private:
  HermiteBasis hnf_;
  SmithForm smith_;
  std::vector<Integer> moduli_;
  std::vector<std::size_t> positions_;
};

}  // namespace trusskit
