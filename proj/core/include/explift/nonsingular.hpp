#pragma once

#include "explift/hermitian.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace explift {

// The enumeration would exceed the exact-check budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MinorWitness {
  std::vector<int> rows;
  std::vector<int> cols;
};

std::string to_string(const MinorWitness& w);

struct TNSReport {
  bool is_tns = false;
  // Smallest |det| over all minors divided by the product of the minor's row
  // norms (Hadamard ratio, in [0, 1]).
  double min_abs_minor = 0.0;
  // Smallest raw |det| over all minors.
  double min_raw_minor = 0.0;
  std::optional<MinorWitness> witness;  // first vanishing minor found
  std::uint64_t minors_checked = 0;
};

inline constexpr std::uint64_t kMinorBudget = 2'000'000;
inline constexpr double kMinorTol = 1e-10;

// sum_s C(p,s) C(q,s), saturating at UINT64_MAX.
std::uint64_t minor_count(int p, int q);

// Determinant by fraction-free (Bareiss) elimination with row pivoting.
double bareiss_determinant(RealMatrix m);

// Enumerates every s x s minor, s = 1..min(p,q). A minor counts as vanishing
// when |det| <= tol * prod(row norms). Throws BudgetExceeded past kMinorBudget.
TNSReport all_minors_nonzero(const RealMatrix& a, double tol = kMinorTol);

class ComplementError : public std::runtime_error {
 public:
  ComplementError(const std::string& msg, MinorWitness w)
      : std::runtime_error(msg), witness(std::move(w)) {}
  MinorWitness witness;
};

// Random totally non-singular B (p x (p-q)) with A^t B = 0: uniform [-1,1]
// combinations of an orthonormal basis of ker(A^t), each candidate verified by
// full minor enumeration. Columns are unit-normalized. A must have full column
// rank; its own total non-singularity is not re-certified, since minors of
// totally positive Vandermonde blocks fall below kMinorTol (8 x 6 and up).
// Throws ComplementError when no draw verifies.
RealMatrix tns_complement(const RealMatrix& a, std::uint64_t seed, int max_retries = 32);

}  // namespace explift
