#include "explift/measurement.hpp"

#include "explift/nonsingular.hpp"
#include "explift/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace explift {

MeasurementOperator::MeasurementOperator(MeasurementEnsemble ensemble, double rank_tol)
    : ensemble_(std::move(ensemble)), rank_tol_(rank_tol) {
  const int n = ensemble_.n;
  if (n < 1) throw std::invalid_argument("MeasurementOperator: ensemble has no dimension");
  if (ensemble_.matrices.empty()) throw std::invalid_argument("MeasurementOperator: empty ensemble");
  const Eigen::Index dim = static_cast<Eigen::Index>(n) * n;
  coord_.resize(static_cast<Eigen::Index>(ensemble_.matrices.size()), dim);
  for (std::size_t i = 0; i < ensemble_.matrices.size(); ++i) {
    const HermitianMatrix& g = ensemble_.matrices[i];
    if (g.dim() != n) throw std::invalid_argument("MeasurementOperator: operator dimension mismatch");
    coord_.row(static_cast<Eigen::Index>(i)) = to_coords(g).transpose();
  }

  Eigen::BDCSVD<RealMatrix> svd(coord_, Eigen::ComputeFullU | Eigen::ComputeFullV);
  sigma_ = svd.singularValues();
  const double cut = rank_tol * (sigma_.size() ? sigma_(0) : 0.0);
  rank_ = 0;
  while (rank_ < sigma_.size() && sigma_(rank_) > cut) ++rank_;

  const RealMatrix& u = svd.matrixU();
  const RealMatrix& v = svd.matrixV();
  pinv_ = RealMatrix::Zero(dim, coord_.rows());
  for (int i = 0; i < rank_; ++i) pinv_ += (v.col(i) / sigma_(i)) * u.col(i).transpose();
  null_ = v.rightCols(dim - rank_);
}

double MeasurementOperator::sigma_min() const { return sigma_.size() ? sigma_(sigma_.size() - 1) : 0.0; }
double MeasurementOperator::sigma_max() const { return sigma_.size() ? sigma_(0) : 0.0; }

RealVector MeasurementOperator::apply(const HermitianMatrix& x) const {
  if (x.dim() != n()) throw std::invalid_argument("apply: dimension mismatch");
  return coord_ * to_coords(x);
}

RealVector MeasurementOperator::apply_direct(const HermitianMatrix& x) const {
  if (x.dim() != n()) throw std::invalid_argument("apply_direct: dimension mismatch");
  RealVector out(m());
  for (int i = 0; i < m(); ++i) {
    const Complex t = (ensemble_.matrices[i].matrix() * x.matrix()).trace();
    out(i) = t.real();  // imaginary part is rounding noise for Hermitian pairs
  }
  return out;
}

HermitianMatrix MeasurementOperator::adjoint(const RealVector& y) const {
  if (y.size() != m()) {
    throw std::invalid_argument("adjoint: expected " + std::to_string(m()) + " values, got " +
                                std::to_string(y.size()));
  }
  return from_coords(n(), coord_.transpose() * y);
}

RealVector MeasurementOperator::pseudo_solve(const RealVector& y) const {
  if (y.size() != m()) throw std::invalid_argument("pseudo_solve: length mismatch");
  return pinv_ * y;
}

KernelBasis kernel_basis_structural(const MeasurementEnsemble& e, std::uint64_t seed) {
  if (e.recipe.kind == Recipe::custom) {
    throw std::invalid_argument("kernel_basis_structural: custom ensembles have no block structure");
  }
  const std::vector<AntidiagBlock> blocks = coefficient_blocks(e);
  const int n = e.n;
  const int r = e.r;

  KernelBasis kb;
  kb.n = n;
  kb.provenance = Provenance::structural;
  for (const AntidiagBlock& b : blocks) {
    const int len = antidiag_length(n, b.k);
    if (len <= r) continue;  // boundary antidiagonals contribute nothing
    const RealMatrix comp_re =
        tns_complement(b.real_coeffs, stream_key(seed, {static_cast<std::uint64_t>(b.k), 0}));
    const RealMatrix comp_im =
        tns_complement(b.imag_coeffs, stream_key(seed, {static_cast<std::uint64_t>(b.k), 1}));
    for (Eigen::Index j = 0; j < comp_re.cols(); ++j) {
      kb.elements.push_back(antidiag_include(n, b.k, RealVector(comp_re.col(j))));
      kb.elements.push_back(antidiag_include(
          n, b.k, ComplexVector(Complex(0.0, 1.0) * comp_im.col(j).cast<Complex>())));
    }
  }
  return kb;
}

KernelBasis kernel_basis_numeric(const MeasurementOperator& m, double tol) {
  KernelBasis kb;
  kb.n = m.n();
  kb.provenance = Provenance::numeric;
  RealMatrix null;
  if (tol == m.rank_tol()) {
    null = m.null_space();
  } else {
    Eigen::BDCSVD<RealMatrix> svd(m.coord(), Eigen::ComputeFullV);
    const RealVector& s = svd.singularValues();
    const double cut = tol * (s.size() ? s(0) : 0.0);
    int rank = 0;
    while (rank < s.size() && s(rank) > cut) ++rank;
    null = svd.matrixV().rightCols(svd.matrixV().cols() - rank);
  }
  for (Eigen::Index j = 0; j < null.cols(); ++j) {
    kb.elements.push_back(from_coords(m.n(), null.col(j)));
  }
  return kb;
}

RealMatrix coord_columns(const std::vector<HermitianMatrix>& elems, int n) {
  RealMatrix out(static_cast<Eigen::Index>(n) * n, static_cast<Eigen::Index>(elems.size()));
  for (std::size_t i = 0; i < elems.size(); ++i) {
    out.col(static_cast<Eigen::Index>(i)) = to_coords(elems[i]);
  }
  return out;
}

int numeric_rank(const RealMatrix& a, double tol) {
  if (a.size() == 0) return 0;
  Eigen::BDCSVD<RealMatrix> svd(a);
  const RealVector& s = svd.singularValues();
  const double cut = tol * s(0);
  int rank = 0;
  while (rank < s.size() && s(rank) > cut) ++rank;
  return rank;
}

RealMatrix orthonormal_span(const RealMatrix& cols, double tol) {
  if (cols.cols() == 0) return RealMatrix(cols.rows(), 0);
  Eigen::BDCSVD<RealMatrix> svd(cols, Eigen::ComputeThinU);
  const RealVector& s = svd.singularValues();
  const double cut = tol * s(0);
  int rank = 0;
  while (rank < s.size() && s(rank) > cut) ++rank;
  return svd.matrixU().leftCols(rank);
}

double max_principal_angle(const RealMatrix& a, const RealMatrix& b, double tol) {
  const RealMatrix qa = orthonormal_span(a, tol);
  const RealMatrix qb = orthonormal_span(b, tol);
  if (qa.cols() != qb.cols()) return std::numbers::pi / 2.0;
  if (qa.cols() == 0) return 0.0;
  // sin of the largest angle = ||(I - Qa Qa^T) Qb||_2.
  const RealMatrix resid = qb - qa * (qa.transpose() * qb);
  Eigen::BDCSVD<RealMatrix> svd(resid);
  const double s = svd.singularValues()(0);
  return std::asin(std::min(1.0, s));
}

double max_principal_angle(const KernelBasis& a, const KernelBasis& b) {
  if (a.n != b.n) throw std::invalid_argument("max_principal_angle: dimension mismatch");
  return max_principal_angle(coord_columns(a.elements, a.n), coord_columns(b.elements, b.n));
}

double containment_residual(const RealMatrix& a, const RealMatrix& b, double tol) {
  const RealMatrix qa = orthonormal_span(a, tol);
  double worst = 0.0;
  for (Eigen::Index j = 0; j < b.cols(); ++j) {
    const double nrm = b.col(j).norm();
    if (nrm == 0.0) continue;
    const RealVector r = b.col(j) - qa * (qa.transpose() * b.col(j));
    worst = std::max(worst, r.norm() / nrm);
  }
  return worst;
}

}  // namespace explift
