#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace explift {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Raised when an iterative numerical kernel fails to reach its tolerance.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dense n x n Hermitian matrix. The conjugate symmetry is restored exactly
// on construction, so every instance satisfies A(j,l) == conj(A(l,j)) and has
// a real diagonal.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;

  // Zero matrix of dimension n.
  explicit HermitianMatrix(int n);

  // Takes the Hermitian part (A + A^*)/2. Throws if `a` is not square or
  // deviates from Hermitian by more than `tol` (relative to its norm).
  explicit HermitianMatrix(const ComplexMatrix& a, double tol = 1e-12);

  static HermitianMatrix identity(int n);
  static HermitianMatrix outer(const ComplexVector& x);  // x x^*
  static HermitianMatrix unit_projector(int n, int i);   // e_i e_i^*
  static HermitianMatrix diagonal(const RealVector& d);

  int dim() const { return static_cast<int>(m_.rows()); }
  const ComplexMatrix& matrix() const { return m_; }
  Complex operator()(int j, int l) const { return m_(j, l); }

  double frobenius_norm() const { return m_.norm(); }
  double trace() const { return m_.diagonal().real().sum(); }

  HermitianMatrix& operator+=(const HermitianMatrix& o);
  HermitianMatrix& operator-=(const HermitianMatrix& o);
  HermitianMatrix& operator*=(double s);

  friend HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b) { return a += b; }
  friend HermitianMatrix operator-(HermitianMatrix a, const HermitianMatrix& b) { return a -= b; }
  friend HermitianMatrix operator*(HermitianMatrix a, double s) { return a *= s; }
  friend HermitianMatrix operator*(double s, HermitianMatrix a) { return a *= s; }
  friend HermitianMatrix operator-(HermitianMatrix a) { return a *= -1.0; }

  bool operator==(const HermitianMatrix& o) const { return m_ == o.m_; }

 private:
  struct Trusted {};
  HermitianMatrix(ComplexMatrix a, Trusted);
  friend HermitianMatrix make_hermitian_unchecked(ComplexMatrix a);

  ComplexMatrix m_;
};

// Symmetrizes without the deviation check. For internal constructions whose
// output is Hermitian up to rounding.
HermitianMatrix make_hermitian_unchecked(ComplexMatrix a);

// Hilbert-Schmidt inner product tr(AB).
double hs_inner(const HermitianMatrix& a, const HermitianMatrix& b);

// Eigenvalues in non-increasing order with matching orthonormal eigenvectors
// stored as the columns of `vectors`.
struct EigSpectrum {
  RealVector values;
  ComplexMatrix vectors;
  int sweeps = 0;
};

struct JacobiOptions {
  int max_sweeps = 100;
  double rel_tol = 1e-13;  // off-diagonal Frobenius mass relative to ||A||_2
  // Optional (numerically) unitary n x n starting basis U: the sweeps run on
  // U^* A U and the eigenvectors come back in the original coordinates.
  const ComplexMatrix* start = nullptr;
};

// Cyclic complex Jacobi eigensolver. Throws NumericalError if the sweep cap is
// reached before the off-diagonal mass drops below tolerance.
EigSpectrum eig_ordered(const HermitianMatrix& a, const JacobiOptions& opts = {});

// Length of the upper half of the k-th antidiagonal of an n x n matrix,
// k in 1..2n-3.
int antidiag_length(int n, int k);

// Places v along the upper half of antidiagonal k (ordered by row) scaled by
// 1/sqrt(2); the lower half receives the conjugates. tr(i(v) i(w)) = <v,w>
// for real v, w.
HermitianMatrix antidiag_include(int n, int k, const ComplexVector& v);
HermitianMatrix antidiag_include(int n, int k, const RealVector& v);

// Row index of the p-th upper entry of antidiagonal k (column is k - row).
int antidiag_row(int n, int k, int p);

// Nearest PSD matrix in Frobenius norm: negative eigenvalues clamped to zero.
HermitianMatrix psd_project(const HermitianMatrix& a);

// Same, also reporting the smallest eigenvalue of the input.
HermitianMatrix psd_project(const HermitianMatrix& a, double* min_eigenvalue);

// Same, with `basis` as the Jacobi starting basis when it is n x n; on return
// it holds the eigenvectors of `a`. For sequences of nearby matrices.
HermitianMatrix psd_project(const HermitianMatrix& a, double* min_eigenvalue, ComplexMatrix& basis);

struct SignCounts {
  int positives = 0;
  int negatives = 0;
  bool operator==(const SignCounts&) const = default;
};

SignCounts signed_eig_counts(const HermitianMatrix& a, double tol);
SignCounts signed_eig_counts(const EigSpectrum& spectrum, double tol);

// 1e-8 * max(1, ||A||_2).
double default_sign_tol(const HermitianMatrix& a);

// Real coordinates in the orthonormal basis of H(n): the n diagonal units
// followed, antidiagonal by antidiagonal (k = 1..2n-3) and position by
// position, by the pair i_k(e_p), i_k(i e_p). Length n^2.
RealVector to_coords(const HermitianMatrix& a);
HermitianMatrix from_coords(int n, const RealVector& c);

}  // namespace explift
