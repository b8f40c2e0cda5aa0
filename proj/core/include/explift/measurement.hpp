#pragma once

#include "explift/frames.hpp"
#include "explift/hermitian.hpp"

#include <cstdint>
#include <vector>

namespace explift {

// The linear map X -> (tr(G_1 X), ..., tr(G_m X)) of an ensemble, represented
// by its coordinate matrix in the orthonormal basis used by to_coords. Singular
// values of the coordinate matrix are the singular values of the map.
class MeasurementOperator {
 public:
  // Singular values below rank_tol * sigma_max are treated as zero.
  explicit MeasurementOperator(MeasurementEnsemble ensemble, double rank_tol = 1e-10);

  const MeasurementEnsemble& ensemble() const { return ensemble_; }
  int n() const { return ensemble_.n; }
  int m() const { return static_cast<int>(coord_.rows()); }

  const RealMatrix& coord() const { return coord_; }
  const RealVector& singular_values() const { return sigma_; }
  double sigma_min() const;
  double sigma_max() const;
  int numeric_rank() const { return rank_; }
  double rank_tol() const { return rank_tol_; }
  bool injective_on_span() const { return rank_ == m(); }

  RealVector apply(const HermitianMatrix& x) const;
  // Entrywise traces, independent of the coordinate matrix.
  RealVector apply_direct(const HermitianMatrix& x) const;
  HermitianMatrix adjoint(const RealVector& y) const;

  // Minimum-norm least-squares preimage of y, in coordinates.
  RealVector pseudo_solve(const RealVector& y) const;

  // Orthonormal basis (columns, in coordinates) of Ker(M).
  const RealMatrix& null_space() const { return null_; }

 private:
  MeasurementEnsemble ensemble_;
  double rank_tol_;
  RealMatrix coord_;
  RealVector sigma_;
  RealMatrix pinv_;
  RealMatrix null_;
  int rank_ = 0;
};

enum class Provenance { structural, numeric };

struct KernelBasis {
  int n = 0;
  std::vector<HermitianMatrix> elements;
  Provenance provenance = Provenance::numeric;

  std::size_t size() const { return elements.size(); }
  bool empty() const { return elements.empty(); }
};

// Kernel assembled antidiagonal by antidiagonal from totally non-singular
// complements of the coefficient blocks: i_k(B_k[j]), i_k(i B'_k[j]) for
// k = 2r+1..2(n-r)-3. Requires a block-structured recipe (thm1/thm2/thm3/
// example); complements are drawn from streams keyed by (seed, k).
KernelBasis kernel_basis_structural(const MeasurementEnsemble& e, std::uint64_t seed = 0);

// SVD null space of the coordinate matrix with relative tolerance `tol`.
KernelBasis kernel_basis_numeric(const MeasurementOperator& m, double tol = 1e-10);

// Coordinates of the elements as columns (n^2 x size).
RealMatrix coord_columns(const std::vector<HermitianMatrix>& elems, int n);

// Orthonormal basis of the column span, rank decided with relative tolerance.
RealMatrix orthonormal_span(const RealMatrix& cols, double tol = 1e-10);

// Sine-accurate largest principal angle between two column spans. Returns
// pi/2 when the dimensions differ.
double max_principal_angle(const RealMatrix& a, const RealMatrix& b, double tol = 1e-10);
double max_principal_angle(const KernelBasis& a, const KernelBasis& b);

// max over columns of b of the distance to span(a), relative to the column norm.
double containment_residual(const RealMatrix& a, const RealMatrix& b, double tol = 1e-10);

int numeric_rank(const RealMatrix& a, double tol = 1e-10);

}  // namespace explift
