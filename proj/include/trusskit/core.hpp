#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace trusskit {

// Carrier elements are addressed by their position in the carrier order.
using Index = std::uint32_t;

// Exact integers for affine coefficients and lattice arithmetic.
using Integer = mpz_class;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition of an operation does not hold for the given input.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Raised when a carrier is asked to be enumerated but is infinite.
class InfiniteCarrierError : public Error {
 public:
  using Error::Error;
};

// Raised when materializing a structure would exceed a configured size guard.
class SizeLimitError : public Error {
 public:
  using Error::Error;
};

struct Violation {
  std::string law;
  std::vector<Index> witness;
};

// Outcome of an exhaustive axiom scan.  Violations are data: `count` is the
// exact number of failing instances, `violations` holds the first
// `kMaxListed` of them in scan order.
struct ValidationReport {
  static constexpr std::size_t kMaxListed = 10000;

  std::vector<Violation> violations;
  std::size_t count = 0;
  // Laws that were checked through an equivalent reduced scan instead of a
  // literal scan over every variable assignment (large carriers).
  std::vector<std::string> reduced_checks;

  bool ok() const { return count == 0; }
  void add(std::string law, std::vector<Index> witness) {
    ++count;
    if (violations.size() < kMaxListed) violations.push_back({std::move(law), std::move(witness)});
  }
  void merge(const ValidationReport& other) {
    for (const auto& v : other.violations) {
      if (violations.size() < kMaxListed) violations.push_back(v);
    }
    count += other.count;
    reduced_checks.insert(reduced_checks.end(), other.reduced_checks.begin(),
                          other.reduced_checks.end());
  }
};

// Sum of coefficient-weighted generators; used for sparse relator rows and for
// affine combinations (coefficients summing to one) of carrier elements.
using SparseRow = std::vector<std::pair<Index, std::int64_t>>;

// Value of `k` reduced into [0, m), m > 0.
std::uint64_t mod_reduce(const Integer& k, std::uint64_t m);

std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);

}  // namespace trusskit
