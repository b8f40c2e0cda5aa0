#include "explift/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace explift {

namespace {

void require_same_dim(const HermitianMatrix& a, const HermitianMatrix& b, const char* what) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) + ")");
  }
}

}  // namespace

HermitianMatrix::HermitianMatrix(int n) {
  if (n < 1) throw std::invalid_argument("HermitianMatrix: dimension must be positive");
  m_ = ComplexMatrix::Zero(n, n);
}

HermitianMatrix::HermitianMatrix(const ComplexMatrix& a, double tol) {
  if (a.rows() != a.cols() || a.rows() < 1) {
    throw std::invalid_argument("HermitianMatrix: matrix must be square and non-empty");
  }
  const double dev = (a - a.adjoint()).norm();
  if (dev > tol * std::max(1.0, a.norm())) {
    throw std::invalid_argument("HermitianMatrix: input is not Hermitian (deviation " +
                                std::to_string(dev) + ")");
  }
  m_ = 0.5 * (a + a.adjoint());
}

HermitianMatrix::HermitianMatrix(ComplexMatrix a, Trusted) : m_(std::move(a)) {}

HermitianMatrix make_hermitian_unchecked(ComplexMatrix a) {
  ComplexMatrix sym = 0.5 * (a + a.adjoint());
  return HermitianMatrix(std::move(sym), HermitianMatrix::Trusted{});
}

HermitianMatrix HermitianMatrix::identity(int n) {
  HermitianMatrix out(n);
  out.m_.setIdentity();
  return out;
}

HermitianMatrix HermitianMatrix::outer(const ComplexVector& x) {
  if (x.size() < 1) throw std::invalid_argument("HermitianMatrix::outer: empty vector");
  ComplexMatrix m = x * x.adjoint();
  for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, i) = Complex(m(i, i).real(), 0.0);
  return HermitianMatrix(std::move(m), Trusted{});
}

HermitianMatrix HermitianMatrix::unit_projector(int n, int i) {
  if (i < 0 || i >= n) throw std::invalid_argument("unit_projector: index out of range");
  HermitianMatrix out(n);
  out.m_(i, i) = 1.0;
  return out;
}

HermitianMatrix HermitianMatrix::diagonal(const RealVector& d) {
  HermitianMatrix out(static_cast<int>(d.size()));
  for (Eigen::Index i = 0; i < d.size(); ++i) out.m_(i, i) = d(i);
  return out;
}

HermitianMatrix& HermitianMatrix::operator+=(const HermitianMatrix& o) {
  require_same_dim(*this, o, "operator+");
  m_ += o.m_;
  return *this;
}

HermitianMatrix& HermitianMatrix::operator-=(const HermitianMatrix& o) {
  require_same_dim(*this, o, "operator-");
  m_ -= o.m_;
  return *this;
}

HermitianMatrix& HermitianMatrix::operator*=(double s) {
  m_ *= s;
  return *this;
}

double hs_inner(const HermitianMatrix& a, const HermitianMatrix& b) {
  require_same_dim(a, b, "hs_inner");
  // tr(AB) = sum_jl A_jl B_lj = sum_jl A_jl conj(B_jl) for Hermitian B.
  return (a.matrix().array() * b.matrix().array().conjugate()).real().sum();
}

EigSpectrum eig_ordered(const HermitianMatrix& input, const JacobiOptions& opts) {
  const int n = input.dim();
  ComplexMatrix a = input.matrix();
  ComplexMatrix v = ComplexMatrix::Identity(n, n);
  const double scale = a.norm();
  if (opts.start) {
    if (opts.start->rows() != n || opts.start->cols() != n) {
      throw std::invalid_argument("eig_ordered: starting basis has the wrong size");
    }
    v = *opts.start;
    a = v.adjoint() * a * v;
  }
  const double target = opts.rel_tol * scale;

  auto off_diagonal = [&]() {
    double s = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) s += std::norm(a(p, q));
    return std::sqrt(2.0 * s);
  };

  int sweep = 0;
  while (off_diagonal() > target) {
    if (sweep == opts.max_sweeps) {
      throw NumericalError("eig_ordered: Jacobi did not converge in " +
                           std::to_string(opts.max_sweeps) + " sweeps");
    }
    ++sweep;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const Complex b = a(p, q);
        const double mag = std::abs(b);
        if (mag == 0.0) continue;
        const Complex ph = b / mag;
        const Complex phc = std::conj(ph);
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        // A <- U^* A U with U = [[c, s], [-s conj(ph), c conj(ph)]] on (p, q).
        for (int k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = phc * a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = ph * a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = app - t * mag;
        a(q, q) = aqq + t * mag;
        for (int k = 0; k < n; ++k) {
          const Complex vkp = v(k, p);
          const Complex vkq = phc * v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return a(i, i).real() > a(j, j).real(); });

  EigSpectrum out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  out.sweeps = sweep;
  for (int i = 0; i < n; ++i) {
    out.values(i) = a(order[i], order[i]).real();
    out.vectors.col(i) = v.col(order[i]);
  }
  return out;
}

int antidiag_length(int n, int k) {
  if (n < 2 || k < 1 || k > 2 * n - 3) {
    throw std::invalid_argument("antidiag_length: k=" + std::to_string(k) +
                                " outside 1.." + std::to_string(2 * n - 3));
  }
  // ceil(k/2) below the main antidiagonal, ceil(n-1-k/2) beyond it.
  if (k <= n - 1) return (k + 1) / 2;
  return n - 1 - k / 2;
}

int antidiag_row(int n, int k, int p) {
  const int len = antidiag_length(n, k);
  if (p < 0 || p >= len) throw std::invalid_argument("antidiag_row: position out of range");
  return std::max(0, k - (n - 1)) + p;
}

HermitianMatrix antidiag_include(int n, int k, const ComplexVector& v) {
  const int len = antidiag_length(n, k);
  if (v.size() != len) {
    throw std::invalid_argument("antidiag_include: expected " + std::to_string(len) +
                                " coefficients for k=" + std::to_string(k) + ", got " +
                                std::to_string(v.size()));
  }
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  const double root2 = std::sqrt(2.0);
  for (int p = 0; p < len; ++p) {
    const int j = antidiag_row(n, k, p);
    const int l = k - j;
    m(j, l) = v(p) / root2;
    m(l, j) = std::conj(v(p)) / root2;
  }
  return make_hermitian_unchecked(std::move(m));
}

HermitianMatrix antidiag_include(int n, int k, const RealVector& v) {
  return antidiag_include(n, k, ComplexVector(v.cast<Complex>()));
}

namespace {

HermitianMatrix psd_from_spectrum(const EigSpectrum& s, int n, double* min_eigenvalue) {
  if (min_eigenvalue) *min_eigenvalue = s.values(n - 1);
  int keep = 0;
  while (keep < n && s.values(keep) > 0.0) ++keep;
  if (keep == 0) return HermitianMatrix(n);
  const ComplexMatrix vk = s.vectors.leftCols(keep);
  const ComplexMatrix scaled = vk * s.values.head(keep).cast<Complex>().asDiagonal();
  return make_hermitian_unchecked(scaled * vk.adjoint());
}

}  // namespace

HermitianMatrix psd_project(const HermitianMatrix& a, double* min_eigenvalue) {
  return psd_from_spectrum(eig_ordered(a), a.dim(), min_eigenvalue);
}

HermitianMatrix psd_project(const HermitianMatrix& a, double* min_eigenvalue, ComplexMatrix& basis) {
  const int n = a.dim();
  JacobiOptions opts;
  if (basis.rows() == n && basis.cols() == n) opts.start = &basis;
  EigSpectrum s = eig_ordered(a, opts);
  HermitianMatrix out = psd_from_spectrum(s, n, min_eigenvalue);
  basis = std::move(s.vectors);
  return out;
}

HermitianMatrix psd_project(const HermitianMatrix& a) { return psd_project(a, nullptr); }

SignCounts signed_eig_counts(const EigSpectrum& spectrum, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("signed_eig_counts: tol must be positive");
  SignCounts c;
  for (Eigen::Index i = 0; i < spectrum.values.size(); ++i) {
    if (spectrum.values(i) > tol) ++c.positives;
    if (spectrum.values(i) < -tol) ++c.negatives;
  }
  return c;
}

SignCounts signed_eig_counts(const HermitianMatrix& a, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("signed_eig_counts: tol must be positive");
  return signed_eig_counts(eig_ordered(a), tol);
}

double default_sign_tol(const HermitianMatrix& a) {
  return 1e-8 * std::max(1.0, a.frobenius_norm());
}

RealVector to_coords(const HermitianMatrix& a) {
  const int n = a.dim();
  RealVector c(static_cast<Eigen::Index>(n) * n);
  const double root2 = std::sqrt(2.0);
  Eigen::Index idx = 0;
  for (int i = 0; i < n; ++i) c(idx++) = a(i, i).real();
  for (int k = 1; k <= 2 * n - 3; ++k) {
    const int len = antidiag_length(n, k);
    for (int p = 0; p < len; ++p) {
      const int j = antidiag_row(n, k, p);
      const Complex z = a(j, k - j);
      c(idx++) = root2 * z.real();
      c(idx++) = root2 * z.imag();
    }
  }
  return c;
}

HermitianMatrix from_coords(int n, const RealVector& c) {
  if (c.size() != static_cast<Eigen::Index>(n) * n) {
    throw std::invalid_argument("from_coords: expected n^2 coordinates");
  }
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  const double root2 = std::sqrt(2.0);
  Eigen::Index idx = 0;
  for (int i = 0; i < n; ++i) m(i, i) = c(idx++);
  for (int k = 1; k <= 2 * n - 3; ++k) {
    const int len = antidiag_length(n, k);
    for (int p = 0; p < len; ++p) {
      const int j = antidiag_row(n, k, p);
      const Complex z(c(idx) / root2, c(idx + 1) / root2);
      idx += 2;
      m(j, k - j) = z;
      m(k - j, j) = std::conj(z);
    }
  }
  return make_hermitian_unchecked(std::move(m));
}

}  // namespace explift
