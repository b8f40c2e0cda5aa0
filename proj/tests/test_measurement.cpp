#include "explift/measurement.hpp"
#include "explift/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace explift;

TEST(MeasurementOperator, CoordinateAndDirectTracesAgree) {
  Rng rng = make_stream(21, {});
  const MeasurementOperator m(thm2_ensemble(6, 2, default_thm2_nodes(2)));
  for (int t = 0; t < 5; ++t) {
    const HermitianMatrix x = random_psd(6, 3, rng);
    EXPECT_LT((m.apply(x) - m.apply_direct(x)).norm(), 1e-13);
  }
}

TEST(MeasurementOperator, AdjointIdentity) {
  Rng rng = make_stream(22, {});
  const MeasurementOperator m(thm1_ensemble(5, default_thm1_nodes(5)));
  const HermitianMatrix x = random_psd(5, 2, rng, false);
  const RealVector y = gaussian_vector(m.m(), rng);
  EXPECT_NEAR(m.apply(x).dot(y), hs_inner(x, m.adjoint(y)), 1e-12);
  // Adjoint of a unit vector is the corresponding operator.
  RealVector e = RealVector::Zero(m.m());
  e(7) = 1.0;
  EXPECT_LT((m.adjoint(e) - m.ensemble().matrices[7]).frobenius_norm(), 1e-14);
}

TEST(MeasurementOperator, PseudoSolveIsConsistent) {
  Rng rng = make_stream(23, {});
  const MeasurementOperator m(example_ensemble(5));
  const HermitianMatrix x = random_psd(5, 1, rng);
  const RealVector b = m.apply(x);
  const RealVector y0 = m.pseudo_solve(b);
  EXPECT_LT((m.coord() * y0 - b).norm(), 1e-12);
  // Minimum norm: orthogonal to the kernel.
  EXPECT_LT((m.null_space().transpose() * y0).norm(), 1e-12);
}

TEST(MeasurementOperator, SpectrumOfOrthonormalFamily) {
  const MeasurementOperator m(thm2_ensemble(8, 1, NodeList({1.0}), true));
  EXPECT_NEAR(m.sigma_min(), 1.0, 1e-12);
  EXPECT_NEAR(m.sigma_max(), 1.0, 1e-12);
  EXPECT_TRUE(m.injective_on_span());
  EXPECT_EQ(m.null_space().cols(), 64 - m.m());
}

TEST(KernelBasis, StructuralMatchesNumericForThm1) {
  for (int n = 3; n <= 8; ++n) {
    const MeasurementEnsemble e = thm1_ensemble(n, default_thm1_nodes(n));
    const MeasurementOperator m(e);
    const KernelBasis s = kernel_basis_structural(e, 5);
    const KernelBasis k = kernel_basis_numeric(m);
    EXPECT_EQ(static_cast<int>(s.size()), (n - 2) * (n - 3)) << n;
    EXPECT_EQ(k.size(), s.size()) << n;
    EXPECT_EQ(s.provenance, Provenance::structural);
    if (!s.empty()) {
      EXPECT_LT(max_principal_angle(s, k), 1e-8) << n;
    }
    for (const HermitianMatrix& z : s.elements)
      for (const HermitianMatrix& g : e.matrices) EXPECT_LT(std::abs(hs_inner(z, g)), 1e-10);
  }
}

TEST(KernelBasis, StructuralMatchesNumericForThm2) {
  for (auto [n, r] : {std::pair{5, 2}, {7, 2}, {7, 3}, {8, 3}}) {
    const MeasurementEnsemble e = thm2_ensemble(n, r, default_thm2_nodes(r));
    const KernelBasis s = kernel_basis_structural(e, 9);
    const KernelBasis k = kernel_basis_numeric(MeasurementOperator(e));
    EXPECT_EQ(static_cast<int>(s.size()), n * n - block_count(n, r));
    EXPECT_EQ(k.size(), s.size());
    if (!s.empty()) {
      EXPECT_LT(max_principal_angle(s, k), 1e-8);
    }
  }
}

TEST(KernelBasis, Thm1KernelIsNodeIndependent) {
  const int n = 6;
  const KernelBasis a = kernel_basis_numeric(MeasurementOperator(thm1_ensemble(n, default_thm1_nodes(n))));
  std::vector<double> other;
  for (int i = 0; i < 2 * n - 3; ++i) other.push_back(-1.0 + 0.15 * i + (i >= 6 ? 0.2 : 0.0));
  const KernelBasis b = kernel_basis_numeric(MeasurementOperator(thm1_ensemble(n, NodeList(other))));
  EXPECT_LT(max_principal_angle(a, b), 1e-9);
}

TEST(KernelBasis, CustomEnsembleRejected) {
  const MeasurementEnsemble e = custom_ensemble(3, 1, {HermitianMatrix::identity(3)});
  EXPECT_THROW(kernel_basis_structural(e), std::invalid_argument);
}

TEST(PrincipalAngle, KnownConfigurations) {
  RealMatrix a(3, 1), b(3, 1);
  a << 1, 0, 0;
  const double th = 0.3;
  b << std::cos(th), std::sin(th), 0;
  EXPECT_NEAR(max_principal_angle(a, b), th, 1e-14);
  EXPECT_NEAR(max_principal_angle(a, a), 0.0, 1e-15);
  EXPECT_NEAR(max_principal_angle(a, RealMatrix::Identity(3, 2)), std::numbers::pi / 2, 0.0);
}

TEST(Containment, ResidualAndRank) {
  RealMatrix a = RealMatrix::Identity(4, 2);
  RealMatrix b(4, 1);
  b << 1, 1, 0, 0;
  EXPECT_LT(containment_residual(a, b), 1e-15);
  b(3, 0) = 1.0;
  EXPECT_NEAR(containment_residual(a, b), 1.0 / std::sqrt(3.0), 1e-14);
  RealMatrix c(3, 3);
  c << 1, 2, 3, 2, 4, 6, 1, 0, 1;
  EXPECT_EQ(numeric_rank(c), 2);
}
