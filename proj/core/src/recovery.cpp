#include "explift/recovery.hpp"

#include "explift/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace explift {

namespace {

constexpr int kPolishEvery = 20;
constexpr double kPolishStart = 1e-3;
constexpr int kColdStartEvery = 64;

void check_inputs(const MeasurementOperator& m, const RealVector& b, const RecoveryOptions& o,
                  const char* who) {
  if (b.size() != m.m()) {
    throw std::invalid_argument(std::string(who) + ": expected " + std::to_string(m.m()) +
                                " measurements, got " + std::to_string(b.size()));
  }
  if (!b.allFinite()) throw std::invalid_argument(std::string(who) + ": non-finite measurements");
  if (!(o.tol > 0.0)) throw std::invalid_argument(std::string(who) + ": tol must be positive");
  if (o.max_iters < 1) throw std::invalid_argument(std::string(who) + ": max_iters must be >= 1");
}

RealVector psd_coords(int n, const RealVector& c, double* min_eig = nullptr) {
  return to_coords(psd_project(from_coords(n, c), min_eig));
}

// Warm-started projection; the basis is dropped periodically so rounding in the
// accumulated rotations stays bounded.
RealVector psd_coords(int n, const RealVector& c, double* min_eig, ComplexMatrix& basis, int it) {
  if (it % kColdStartEvery == 0) basis.resize(0, 0);
  return to_coords(psd_project(from_coords(n, c), min_eig, basis));
}

double min_eigenvalue(const HermitianMatrix& y) {
  const EigSpectrum s = eig_ordered(y);
  return s.values(s.values.size() - 1);
}

// Candidate ranks of a near low-rank PSD iterate, ascending: every k at which
// the spectrum drops by a factor of 100 or more.
std::vector<int> candidate_ranks(const RealVector& values) {
  std::vector<int> out;
  const double top = values(0);
  if (!(top > 0.0)) return out;
  const double floor = 1e-14 * top;
  for (Eigen::Index k = 0; k < values.size() && values(k) > floor; ++k) {
    const double next = k + 1 < values.size() ? std::max(values(k + 1), 0.0) : 0.0;
    if (next <= 1e-2 * values(k)) out.push_back(static_cast<int>(k) + 1);
  }
  return out;
}

RealVector factor_coords(const ComplexMatrix& v) {
  return to_coords(HermitianMatrix(v * v.adjoint()));
}

// Gauss-Newton on V -> M(V V^*) - b from the leading rank-r factor of y. The gauge
// V -> V U leaves the residual unchanged, so each step is the minimum-norm
// least-squares solution. Writes the refined coordinates into y on success.
bool gauss_newton_factor(const MeasurementOperator& m, const RealVector& b, double target,
                         const EigSpectrum& s, int r, RealVector& y) {
  const int n = m.n();
  const RealMatrix& c = m.coord();
  ComplexMatrix v = s.vectors.leftCols(r) * s.values.head(r).cwiseSqrt().asDiagonal();

  RealVector f = c * factor_coords(v) - b;
  double fn = f.norm();
  RealMatrix jac(c.rows(), 2 * n * r);
  for (int step = 0; step < 30 && fn > 0.01 * target; ++step) {
    for (int j = 0; j < r; ++j)
      for (int i = 0; i < n; ++i)
        for (int part = 0; part < 2; ++part) {
          // d(V V^*) along V(i,j) += 1 or V(i,j) += i is E V^* + V E^*.
          const Complex dir = part == 0 ? Complex(1.0, 0.0) : Complex(0.0, 1.0);
          ComplexMatrix w = ComplexMatrix::Zero(n, n);
          for (int l = 0; l < n; ++l) w(i, l) = dir * std::conj(v(l, j));
          jac.col(2 * (j * n + i) + part) = c * to_coords(HermitianMatrix(w + w.adjoint()));
        }
    Eigen::CompleteOrthogonalDecomposition<RealMatrix> cod(jac);
    cod.setThreshold(1e-10);
    const RealVector delta = cod.solve(-f);
    ComplexMatrix trial = v;
    for (int j = 0; j < r; ++j)
      for (int i = 0; i < n; ++i)
        trial(i, j) += Complex(delta(2 * (j * n + i)), delta(2 * (j * n + i) + 1));
    RealVector ft = c * factor_coords(trial) - b;
    const double ftn = ft.norm();
    if (!(ftn < fn)) break;
    v = std::move(trial);
    f = std::move(ft);
    fn = ftn;
  }
  if (fn > target) return false;
  y = factor_coords(v);
  return true;
}

bool polish_factor(const MeasurementOperator& m, const RealVector& b, double target, RealVector& y) {
  const EigSpectrum s = eig_ordered(from_coords(m.n(), y));
  for (int r : candidate_ranks(s.values))
    if (gauss_newton_factor(m, b, target, s, r, y)) return true;
  return false;
}

RecoveryResult finish(const MeasurementOperator& m, const RealVector& b, const RealVector& y,
                      RecoveryResult r) {
  r.y = from_coords(m.n(), y);
  r.residual = (m.coord() * y - b).norm();
  r.min_eigenvalue = min_eigenvalue(r.y);
  return r;
}

}  // namespace

RecoveryResult recover_noiseless(const MeasurementOperator& m, const RealVector& b,
                                 const RecoveryOptions& opts) {
  check_inputs(m, b, opts, "recover_noiseless");
  const int n = m.n();
  const RealMatrix& c = m.coord();
  const double target = opts.tol * (1.0 + b.norm());
  const Eigen::Index dim = static_cast<Eigen::Index>(n) * n;

  RecoveryResult out;
  out.method = opts.dykstra ? "dykstra" : "alternating_projections";
  RealVector y = RealVector::Zero(dim);
  // Dykstra increments for the affine and cone projections.
  RealVector p = RealVector::Zero(dim);
  RealVector q = RealVector::Zero(dim);
  ComplexMatrix basis;

  for (int it = 1; it <= opts.max_iters; ++it) {
    const RealVector base = opts.dykstra ? RealVector(y + p) : y;
    const RealVector a = base - m.pseudo_solve(c * base - b);
    if (opts.dykstra) p = base - a;
    const RealVector cone_in = opts.dykstra ? RealVector(a + q) : a;
    double lam = 0.0;
    RealVector next = psd_coords(n, cone_in, &lam, basis, it);
    if (opts.dykstra) {
      q = cone_in - next;
      lam = min_eigenvalue(from_coords(n, a));
    }
    y = std::move(next);

    const RealVector r = c * y - b;
    const double residual = r.norm();
    if (opts.record_history) out.history.push_back(m.pseudo_solve(r).norm());
    out.iterations = it;
    if (std::max(residual, std::max(0.0, -lam)) <= target) {
      out.converged = true;
      break;
    }
    if (opts.polish && it % kPolishEvery == 0 && residual <= kPolishStart * (1.0 + b.norm()) &&
        polish_factor(m, b, target, y)) {
      out.converged = true;
      out.polished = true;
      break;
    }
  }
  return finish(m, b, y, std::move(out));
}

RecoveryResult recover_noisy(const MeasurementOperator& m, const RealVector& b,
                             const RecoveryOptions& opts) {
  check_inputs(m, b, opts, "recover_noisy");
  const int n = m.n();
  const RealMatrix& c = m.coord();
  const double smax = m.sigma_max();
  if (!(smax > 0.0)) throw std::invalid_argument("recover_noisy: zero measurement operator");
  const double step = 1.0 / (smax * smax);
  const double target = opts.tol * (1.0 + b.norm());

  RecoveryResult out;
  out.method = "accelerated_projected_gradient";
  RealVector y = psd_coords(n, m.pseudo_solve(b));
  RealVector z = y;
  double theta = 1.0;
  ComplexMatrix basis;

  for (int it = 1; it <= opts.max_iters; ++it) {
    const RealVector grad = c.transpose() * (c * z - b);
    RealVector next = psd_coords(n, z - step * grad, nullptr, basis, it);
    const RealVector move = next - z;
    const double mapping = move.norm() / step;
    if (opts.record_history) out.history.push_back(m.pseudo_solve(c * next - b).norm());
    out.iterations = it;

    // Momentum is dropped as soon as it points uphill.
    if (move.dot(next - y) < 0.0) theta = 1.0;
    const double theta_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
    z = next + ((theta - 1.0) / theta_next) * (next - y);
    y = std::move(next);
    theta = theta_next;
    if (mapping <= target) {
      out.converged = true;
      break;
    }
  }
  return finish(m, b, y, std::move(out));
}

SignalEstimate extract_signal(const HermitianMatrix& y) {
  const EigSpectrum s = eig_ordered(y);
  SignalEstimate out;
  out.lambda1 = s.values(0);
  out.x = std::sqrt(std::max(out.lambda1, 0.0)) * s.vectors.col(0);
  if (s.values.size() > 1) {
    const double gap = s.values(0) - s.values(1);
    out.degenerate = gap <= 1e-10 * std::max(1.0, std::abs(out.lambda1));
  }
  return out;
}

PhaseAlignment align_phase(const ComplexVector& x, const ComplexVector& xhat) {
  if (x.size() != xhat.size()) throw std::invalid_argument("align_phase: size mismatch");
  const Complex ip = x.dot(xhat);  // x^* xhat
  PhaseAlignment out;
  if (std::abs(ip) > 0.0) {
    out.phi = -std::arg(ip);
    if (out.phi < 0.0) out.phi += 2.0 * std::numbers::pi;
  }
  out.error = (x - std::polar(1.0, out.phi) * xhat).norm();
  return out;
}

StabilityEstimate estimate_stability(const MeasurementOperator& m, const KernelBasis& kernel, int r,
                                     int samples, std::uint64_t seed) {
  const int n = m.n();
  if (r < 1 || r >= n) throw std::invalid_argument("estimate_stability: rank out of range");
  if (samples < 1) throw std::invalid_argument("estimate_stability: samples must be >= 1");
  if (!kernel.empty() && kernel.n != n) {
    throw std::invalid_argument("estimate_stability: kernel dimension does not match operator");
  }
  StabilityEstimate out;
  out.sigma_min = m.sigma_min();
  if (!(out.sigma_min > 0.0)) throw std::invalid_argument("estimate_stability: sigma_min is zero");

  if (kernel.empty()) {
    if (m.numeric_rank() < n * n) {
      throw std::invalid_argument("estimate_stability: empty kernel but operator is not onto H(n)");
    }
    out.kernel_empty = true;
    out.c_m_bound = 2.0 / out.sigma_min;
    out.note = "kernel is {0}";
    return out;
  }

  const RealMatrix q = orthonormal_span(coord_columns(kernel.elements, n));
  const int d = static_cast<int>(q.cols());
  const int idx = n - r - 1;  // lambda_{n-r} in descending order, 0-based
  auto evaluate = [&](const RealVector& coef, ComplexVector* vec) {
    const EigSpectrum s = eig_ordered(from_coords(n, q * coef));
    if (vec) *vec = s.vectors.col(idx);
    return s.values(idx);
  };

  Rng rng = make_stream(seed, {0x5354ull});
  RealVector best;
  double best_val = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    RealVector c = gaussian_vector(d, rng);
    c /= c.norm();
    const double v = evaluate(c, nullptr);
    if (v > best_val) {
      best_val = v;
      best = std::move(c);
    }
  }

  // Projected subgradient ascent on the unit sphere of the kernel.
  double eta = 0.1;
  for (int it = 0; it < 500 && eta > 1e-12; ++it) {
    ComplexVector v;
    evaluate(best, &v);
    const RealVector grad = q.transpose() * to_coords(HermitianMatrix::outer(v));
    RealVector tangent = grad - grad.dot(best) * best;
    if (tangent.norm() < 1e-14) break;
    RealVector trial = best + eta * tangent;
    trial /= trial.norm();
    const double val = evaluate(trial, nullptr);
    if (val > best_val) {
      best_val = val;
      best = std::move(trial);
      eta *= 1.5;
    } else {
      eta *= 0.5;
    }
  }

  out.samples = samples;
  out.kappa_hat = -best_val;
  out.c_m_bound = out.kappa_hat > 0.0
                      ? (2.0 / out.sigma_min) * (1.0 + 1.0 / out.kappa_hat)
                      : std::numeric_limits<double>::infinity();
  out.note = "kappa_hat is a sampled upper estimate of kappa";
  return out;
}

}  // namespace explift
