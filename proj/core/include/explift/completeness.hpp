#pragma once

#include "explift/frames.hpp"
#include "explift/measurement.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace explift {

// structural: every hypothesis of the block construction verified exactly.
// sampled: random kernel elements corroborate the eigenvalue-sign criterion.
// oracle: random PSD pairs were discriminated.
enum class CertLevel { structural, sampled, oracle };

std::string level_name(CertLevel l);

struct CheckRecord {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct CompletenessCertificate {
  CertLevel level = CertLevel::structural;
  int r = 0;
  bool passed = false;
  std::vector<CheckRecord> checks;
  std::int64_t trials = 0;
  double tol = 0.0;
  int min_positive = -1;  // smallest eigenvalue-sign counts seen while sampling
  int min_negative = -1;
  std::int64_t violations = 0;
  std::string note;

  // First failed check, if any.
  const CheckRecord* first_failure() const;
};

// Verifies the hypotheses that make a block-structured ensemble r-complete:
// recipe consistency, operator count, G_0 spanning the complement subspace,
// total non-singularity of every coefficient block and linear independence.
// thm1 ensembles are certified through their span-equivalent cos/sin family.
CompletenessCertificate certify_structural(const MeasurementEnsemble& e);

// Samples unit-Frobenius random combinations Z of the kernel basis and checks
// that each has at least r+1 positive and r+1 negative eigenvalues (|lambda| >
// tol). Sampling corroborates, it cannot certify.
CompletenessCertificate kernel_spectral_check(const KernelBasis& kernel, int r,
                                              std::int64_t trials, std::uint64_t seed,
                                              double tol = 1e-8);

// Samples X of rank <= r and X' of random rank, both trace-normalized PSD, and
// flags any pair with ||X - X'|| > tol but ||M(X) - M(X')|| <= tol.
CompletenessCertificate discrimination_oracle(const MeasurementOperator& m, int r,
                                              std::int64_t trials, std::uint64_t seed,
                                              double tol = 1e-6);

}  // namespace explift
