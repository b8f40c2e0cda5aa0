#include "explift/recovery.hpp"
#include "explift/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace explift;

namespace {

double error_to(const RecoveryResult& r, const HermitianMatrix& x) { return (r.y - x).frobenius_norm(); }

}  // namespace

TEST(RecoverNoiseless, ZeroMeasurementsGiveZero) {
  const MeasurementOperator m(example_n4());
  const RecoveryResult r = recover_noiseless(m, RealVector::Zero(m.m()));
  EXPECT_TRUE(r.converged);
  EXPECT_LT(r.y.frobenius_norm(), 1e-12);
}

TEST(RecoverNoiseless, RoundTripExampleN4) {
  const MeasurementOperator m(example_n4());
  for (int t = 0; t < 25; ++t) {
    Rng rng = make_stream(31, {static_cast<std::uint64_t>(t)});
    const HermitianMatrix x = HermitianMatrix::outer(random_unit_vector(4, rng));
    const RecoveryResult r = recover_noiseless(m, m.apply(x));
    EXPECT_TRUE(r.converged);
    EXPECT_LE(error_to(r, x), 1e-6);
    EXPECT_GE(r.min_eigenvalue, -1e-8 * r.y.frobenius_norm());
  }
}

TEST(RecoverNoiseless, RankTwoRoundTrip) {
  const MeasurementOperator m(thm2_ensemble(6, 2, default_thm2_nodes(2)));
  for (int t = 0; t < 10; ++t) {
    Rng rng = make_stream(32, {static_cast<std::uint64_t>(t)});
    const HermitianMatrix x = random_psd(6, 2, rng);
    const RecoveryResult r = recover_noiseless(m, m.apply(x));
    EXPECT_TRUE(r.converged);
    EXPECT_LE(error_to(r, x), 1e-6);
  }
}

TEST(RecoverNoiseless, AffineDistanceIsMonotone) {
  const MeasurementOperator m(thm1_ensemble(6, default_thm1_nodes(6)));
  Rng rng = make_stream(33, {});
  const HermitianMatrix x = HermitianMatrix::outer(random_unit_vector(6, rng));
  RecoveryOptions o;
  o.record_history = true;
  const RecoveryResult r = recover_noiseless(m, m.apply(x), o);
  ASSERT_TRUE(r.converged);
  ASSERT_EQ(static_cast<int>(r.history.size()), r.iterations);
  for (std::size_t i = 1; i < r.history.size(); ++i) EXPECT_LE(r.history[i], r.history[i - 1] + 1e-12) << i;
}

TEST(RecoverNoiseless, DykstraAgrees) {
  const MeasurementOperator m(example_ensemble(5));
  Rng rng = make_stream(34, {});
  const HermitianMatrix x = HermitianMatrix::outer(random_unit_vector(5, rng));
  RecoveryOptions o;
  o.dykstra = true;
  const RecoveryResult r = recover_noiseless(m, m.apply(x), o);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.method, "dykstra");
  EXPECT_LE(error_to(r, x), 1e-6);
}

TEST(RecoverNoiseless, PolishShortensSlowTail) {
  // Small leading component: plain projections crawl on this signal.
  const MeasurementOperator m(thm1_ensemble(9, default_thm1_nodes(9)));
  ComplexVector v(9);
  v << 0.0189, Complex(0.1, 0.21), -0.37, Complex(0.0, 0.11), 0.41, Complex(-0.3, 0.34), 0.56,
      Complex(0.2, -0.17), 0.2;
  const HermitianMatrix x = HermitianMatrix::outer(v / v.norm());
  const RecoveryResult polished = recover_noiseless(m, m.apply(x));
  ASSERT_TRUE(polished.converged);
  ASSERT_TRUE(polished.polished);
  EXPECT_LE(error_to(polished, x), 1e-6);

  RecoveryOptions plain;
  plain.polish = false;
  plain.max_iters = polished.iterations;
  const RecoveryResult r = recover_noiseless(m, m.apply(x), plain);
  EXPECT_FALSE(r.polished);
  EXPECT_GT(error_to(r, x), error_to(polished, x));
}

TEST(RecoverNoiseless, PolishedRankTwoIsExact) {
  const MeasurementOperator m(thm2_ensemble(7, 2, default_thm2_nodes(2)));
  Rng rng = make_stream(35, {});
  const HermitianMatrix x = random_psd(7, 2, rng);
  const RecoveryResult r = recover_noiseless(m, m.apply(x));
  EXPECT_TRUE(r.converged);
  EXPECT_LE(error_to(r, x), 1e-8);
  EXPECT_GE(r.min_eigenvalue, -1e-12);
}

TEST(RecoverNoiseless, InconsistentDataDoesNotConverge) {
  const MeasurementOperator m(example_n4());
  RealVector b = RealVector::Zero(m.m());
  b(0) = -1.0;  // negative diagonal entry
  RecoveryOptions o;
  o.max_iters = 200;
  const RecoveryResult r = recover_noiseless(m, b, o);
  EXPECT_FALSE(r.converged);
  EXPECT_FALSE(r.polished);
  EXPECT_EQ(r.iterations, 200);
  EXPECT_GT(r.residual, 0.5);
}

TEST(RecoverNoiseless, RejectsBadInput) {
  const MeasurementOperator m(example_n4());
  EXPECT_THROW(recover_noiseless(m, RealVector::Zero(3)), std::invalid_argument);
  RecoveryOptions o;
  o.tol = 0.0;
  EXPECT_THROW(recover_noiseless(m, RealVector::Zero(m.m()), o), std::invalid_argument);
  RealVector b = RealVector::Zero(m.m());
  b(1) = std::nan("");
  EXPECT_THROW(recover_noiseless(m, b), std::invalid_argument);
}

TEST(RecoverNoisy, MatchesNoiselessOnExactData) {
  for (const MeasurementEnsemble& e : {example_n4(), thm1_ensemble(5, default_thm1_nodes(5))}) {
    const MeasurementOperator m(e);
    Rng rng = make_stream(35, {});
    const HermitianMatrix x = HermitianMatrix::outer(random_unit_vector(e.n, rng));
    const RealVector b = m.apply(x);
    const RecoveryResult a = recover_noiseless(m, b);
    const RecoveryResult n = recover_noisy(m, b, RecoveryOptions{1e-9, 100000, false, false});
    EXPECT_TRUE(n.converged);
    EXPECT_LE((a.y - n.y).frobenius_norm(), 1e-5);
  }
}

TEST(RecoverNoisy, BoundedErrorUnderNoise) {
  const MeasurementOperator m(example_n4());
  const double eps = 1e-3;
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    Rng rng = make_stream(36, {static_cast<std::uint64_t>(t)});
    const HermitianMatrix x = HermitianMatrix::outer(random_unit_vector(4, rng));
    RealVector f = gaussian_vector(m.m(), rng);
    f *= eps / f.norm();
    const RecoveryResult r = recover_noisy(m, m.apply(x) + f);
    EXPECT_TRUE(r.converged);
    worst = std::max(worst, error_to(r, x) / eps);
  }
  EXPECT_TRUE(std::isfinite(worst));
  EXPECT_LT(worst, 100.0);
}

TEST(RecoverNoisy, InfeasibleDataStaysPsd) {
  const MeasurementOperator m(example_n4());
  const RealVector b = -RealVector::Ones(m.m());
  const RecoveryResult r = recover_noisy(m, b);
  EXPECT_TRUE(r.converged);
  EXPECT_GT(r.residual, 0.1);
  EXPECT_GE(r.min_eigenvalue, -1e-8 * std::max(1.0, r.y.frobenius_norm()));
}

TEST(ExtractSignal, SimpleCases) {
  Rng rng = make_stream(37, {});
  const ComplexVector x = random_unit_vector(5, rng) * 1.7;
  const SignalEstimate s = extract_signal(HermitianMatrix::outer(x));
  const Complex ph = x.dot(s.x) / x.squaredNorm();
  EXPECT_NEAR(std::abs(ph), 1.0, 1e-12);
  EXPECT_LT((s.x - ph * x).norm(), 1e-12);
  EXPECT_FALSE(s.degenerate);

  const SignalEstimate z = extract_signal(HermitianMatrix(3));
  EXPECT_EQ(z.x.norm(), 0.0);
  EXPECT_TRUE(z.degenerate);

  RealVector d(2);
  d << 2.0, 1.0;
  const SignalEstimate t = extract_signal(HermitianMatrix::diagonal(d));
  EXPECT_NEAR(std::abs(t.x(0)), std::sqrt(2.0), 1e-15);
  EXPECT_EQ(t.x(1), Complex(0.0));
}

TEST(AlignPhase, KnownRotationAndOrthogonalCase) {
  Rng rng = make_stream(38, {});
  const ComplexVector x = random_unit_vector(4, rng);
  const PhaseAlignment a = align_phase(x, std::polar(1.0, -std::numbers::pi / 3) * x);
  EXPECT_NEAR(a.phi, std::numbers::pi / 3, 1e-14);
  EXPECT_NEAR(a.error, 0.0, 1e-14);

  ComplexVector u = ComplexVector::Zero(2), v = ComplexVector::Zero(2);
  u(0) = 1.0;
  v(1) = 1.0;
  const PhaseAlignment o = align_phase(u, v);
  EXPECT_EQ(o.phi, 0.0);
  EXPECT_NEAR(o.error, std::sqrt(2.0), 1e-15);
  EXPECT_THROW(align_phase(u, ComplexVector::Zero(3)), std::invalid_argument);
}

TEST(AlignPhase, ErrorIsMinimalOverPhases) {
  Rng rng = make_stream(39, {});
  const ComplexVector x = random_unit_vector(5, rng);
  const ComplexVector y = random_unit_vector(5, rng);
  const PhaseAlignment a = align_phase(x, y);
  for (int k = 0; k < 360; ++k) {
    const double t = 2.0 * std::numbers::pi * k / 360;
    EXPECT_LE(a.error, (x - std::polar(1.0, t) * y).norm() + 1e-14);
  }
}

TEST(AlignPhase, ProofInequalityOnRandomPairs) {
  for (int t = 0; t < 200; ++t) {
    Rng rng = make_stream(40, {static_cast<std::uint64_t>(t)});
    const int n = 2 + t % 7;
    const ComplexVector x = random_unit_vector(n, rng);
    ComplexVector xh = x + 0.3 * random_unit_vector(n, rng);
    const double lhs = align_phase(x, xh).error * x.norm();
    const double rhs = std::sqrt(2.0) * (HermitianMatrix::outer(x) - HermitianMatrix::outer(xh)).frobenius_norm();
    EXPECT_LE(lhs - rhs, 1e-10);
  }
}

TEST(EstimateStability, EmptyKernel) {
  const int n = 3;
  std::vector<HermitianMatrix> all;
  for (int i = 0; i < n * n; ++i) all.push_back(from_coords(n, RealVector::Unit(n * n, i) * 2.0));
  const MeasurementOperator m(custom_ensemble(n, 1, all));
  const KernelBasis k = kernel_basis_numeric(m);
  ASSERT_TRUE(k.empty());
  const StabilityEstimate s = estimate_stability(m, k, 1, 10, 1);
  EXPECT_TRUE(s.kernel_empty);
  EXPECT_NEAR(s.c_m_bound, 2.0 / s.sigma_min, 1e-12);
  EXPECT_NEAR(s.sigma_min, 2.0, 1e-12);
}

TEST(EstimateStability, CertifiedEnsemblesHavePositiveKappa) {
  for (const MeasurementEnsemble& e :
       {example_n4(), thm1_ensemble(5, default_thm1_nodes(5)), thm2_ensemble(6, 2, default_thm2_nodes(2))}) {
    const MeasurementOperator m(e);
    const StabilityEstimate s = estimate_stability(m, kernel_basis_numeric(m), e.r, 2000, 4);
    EXPECT_GT(s.kappa_hat, 0.0);
    EXPECT_LE(s.kappa_hat, 1.0);
    EXPECT_GT(s.sigma_min, 0.0);
    EXPECT_TRUE(std::isfinite(s.c_m_bound));
    EXPECT_NEAR(s.c_m_bound, 2.0 / s.sigma_min * (1.0 + 1.0 / s.kappa_hat), 1e-9 * s.c_m_bound);
    EXPECT_EQ(s.samples, 2000);
  }
}

TEST(EstimateStability, ArgumentChecks) {
  const MeasurementOperator m(example_n4());
  const KernelBasis k = kernel_basis_numeric(m);
  EXPECT_THROW(estimate_stability(m, k, 0, 10, 1), std::invalid_argument);
  EXPECT_THROW(estimate_stability(m, k, 1, 0, 1), std::invalid_argument);
  EXPECT_THROW(estimate_stability(m, KernelBasis{4, {}, Provenance::numeric}, 1, 10, 1), std::invalid_argument);
}
