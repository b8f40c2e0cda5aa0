#pragma once

#include "explift/measurement.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace explift {

struct RecoveryOptions {
  double tol = 1e-9;
  int max_iters = 50'000;
  // Dykstra's correction terms; only useful for near-degenerate intersections.
  bool dykstra = false;
  // Keep the per-iteration distance to the affine set.
  bool record_history = false;
  // Once the projections have settled the rank, refine Y = V V^* by
  // Gauss-Newton on ||M(V V^*) - b||. The refined point is kept only if it
  // meets the stopping test; otherwise the projections continue.
  bool polish = true;
};

inline RecoveryOptions default_noisy_options() {
  RecoveryOptions o;
  o.max_iters = 10'000;
  return o;
}

struct RecoveryResult {
  HermitianMatrix y;
  double residual = 0.0;       // ||M(Y) - b||_2
  double min_eigenvalue = 0.0; // of Y
  int iterations = 0;
  bool converged = false;
  std::string method;
  // Projection iterations only; a polish step is not recorded.
  std::vector<double> history;
  bool polished = false;
};

// Alternating projections between {Y : M(Y) = b} and the PSD cone. For an
// r-complete M and b = M(X), X of rank <= r, the intersection is {X}. Stops
// once both the residual of the PSD iterate and the negative part of the
// affine iterate are below tol * (1 + ||b||). Non-convergence is reported via
// `converged`, never thrown.
RecoveryResult recover_noiseless(const MeasurementOperator& m, const RealVector& b,
                                 const RecoveryOptions& opts = {});

// Minimizes 0.5 ||M(Y) - b||^2 over the PSD cone by accelerated projected
// gradient (step 1/sigma_max^2, momentum with adaptive restart). Stops when the
// gradient-mapping norm drops below tol * (1 + ||b||).
RecoveryResult recover_noisy(const MeasurementOperator& m, const RealVector& b,
                             const RecoveryOptions& opts = default_noisy_options());

struct SignalEstimate {
  ComplexVector x;
  double lambda1 = 0.0;
  // Top eigenvalue is (numerically) repeated, so x is not unique.
  bool degenerate = false;
};

// sqrt(max(lambda_1, 0)) times the leading unit eigenvector of Y.
SignalEstimate extract_signal(const HermitianMatrix& y);

struct PhaseAlignment {
  double phi = 0.0;    // in [0, 2 pi)
  double error = 0.0;  // ||x - e^{i phi} xhat||_2, minimal over all phases
};

PhaseAlignment align_phase(const ComplexVector& x, const ComplexVector& xhat);

struct StabilityEstimate {
  double sigma_min = 0.0;
  double kappa_hat = 0.0;
  double c_m_bound = 0.0;  // (2 / sigma_min)(1 + 1 / kappa_hat)
  int samples = 0;
  bool kernel_empty = false;
  // kappa_hat comes from random search plus local ascent; it over-estimates
  // kappa, so c_m_bound under-estimates the true constant.
  std::string note;
};

// kappa_hat = -max lambda_{n-r}(Z) over sampled unit-Frobenius kernel
// elements, refined by projected subgradient ascent on the kernel sphere.
StabilityEstimate estimate_stability(const MeasurementOperator& m, const KernelBasis& kernel, int r,
                                     int samples, std::uint64_t seed);

}  // namespace explift
