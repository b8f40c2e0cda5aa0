#include "explift/completeness.hpp"
#include "explift/rng.hpp"

#include <gtest/gtest.h>

using namespace explift;

namespace {

const CheckRecord* find_check(const CompletenessCertificate& c, const std::string& name) {
  for (const CheckRecord& r : c.checks)
    if (r.name == name) return &r;
  return nullptr;
}

}  // namespace

TEST(CertifyStructural, AcceptsEveryRecipe) {
  std::vector<MeasurementEnsemble> ensembles = {
      thm1_ensemble(6, default_thm1_nodes(6)), thm2_ensemble(7, 3, default_thm2_nodes(3)),
      thm2_ensemble(9, 1, NodeList({1.0}), true), example_n4(), example_ensemble(7)};
  for (const MeasurementEnsemble& e : ensembles) {
    const CompletenessCertificate c = certify_structural(e);
    EXPECT_TRUE(c.passed) << recipe_name(e.recipe.kind) << ": "
                          << (c.first_failure() ? c.first_failure()->name + " " + c.first_failure()->detail : "");
    EXPECT_EQ(c.level, CertLevel::structural);
    EXPECT_EQ(c.first_failure(), nullptr);
  }
}

TEST(CertifyStructural, TamperedOperatorIsNamed) {
  MeasurementEnsemble e = thm2_ensemble(6, 2, default_thm2_nodes(2));
  e.matrices[15] *= 1.001;
  const CompletenessCertificate c = certify_structural(e);
  EXPECT_FALSE(c.passed);
  ASSERT_NE(c.first_failure(), nullptr);
  EXPECT_EQ(c.first_failure()->name, "operators_match_recipe");
  EXPECT_NE(c.first_failure()->detail.find("operator 15"), std::string::npos);
}

TEST(CertifyStructural, WrongCountAndCustom) {
  MeasurementEnsemble e = example_n4();
  e.matrices.pop_back();
  CompletenessCertificate c = certify_structural(e);
  EXPECT_FALSE(c.passed);
  EXPECT_EQ(c.first_failure()->name, "count");

  c = certify_structural(custom_ensemble(3, 1, {HermitianMatrix::identity(3)}));
  EXPECT_FALSE(c.passed);
  EXPECT_EQ(c.first_failure()->name, "recipe");
}

TEST(CertifyStructural, SingularThm3BlockFailsTnsCheck) {
  MeasurementEnsemble e = example_ensemble(5);
  // Zero one coefficient and rebuild the matching operator so only the TNS
  // hypothesis is violated.
  AntidiagBlock& b = e.recipe.blocks[3];
  b.real_coeffs(0, 0) = 0.0;
  e.matrices[5 + 2 * 3] = antidiag_include(5, b.k, RealVector(b.real_coeffs.col(0)));
  const CompletenessCertificate c = certify_structural(e);
  EXPECT_FALSE(c.passed);
  const CheckRecord* tns = find_check(c, "tns_k4_real");
  ASSERT_NE(tns, nullptr);
  EXPECT_FALSE(tns->passed);
  EXPECT_NE(tns->detail.find("rows {0}"), std::string::npos);
}

TEST(KernelSpectralCheck, CertifiedKernelsPass) {
  const MeasurementEnsemble e = thm2_ensemble(7, 2, default_thm2_nodes(2));
  const KernelBasis k = kernel_basis_structural(e, 1);
  const CompletenessCertificate c = kernel_spectral_check(k, 2, 500, 42);
  EXPECT_TRUE(c.passed);
  EXPECT_GE(c.min_positive, 3);
  EXPECT_GE(c.min_negative, 3);
  EXPECT_EQ(c.violations, 0);
}

TEST(KernelSpectralCheck, DetectsIncompleteKernel) {
  // Kernel containing a rank-one-negative element e_0e_0^* - e_1e_1^* breaks
  // 2-completeness (needs 3 of each sign).
  KernelBasis k;
  k.n = 4;
  RealVector d(4);
  d << 1, -1, 0, 0;
  k.elements.push_back(HermitianMatrix::diagonal(d));
  const CompletenessCertificate c = kernel_spectral_check(k, 2, 20, 1);
  EXPECT_FALSE(c.passed);
  EXPECT_EQ(c.violations, 20);
  EXPECT_EQ(c.min_positive, 1);
}

TEST(KernelSpectralCheck, EmptyKernelAndArguments) {
  KernelBasis k;
  k.n = 3;
  EXPECT_TRUE(kernel_spectral_check(k, 1, 10, 1).passed);
  EXPECT_THROW(kernel_spectral_check(k, 1, 0, 1), std::invalid_argument);
  EXPECT_THROW(kernel_spectral_check(k, 1, 10, 1, 0.0), std::invalid_argument);
}

TEST(KernelSpectralCheck, DeterministicUnderSeed) {
  const KernelBasis k = kernel_basis_numeric(MeasurementOperator(thm1_ensemble(6, default_thm1_nodes(6))));
  const CompletenessCertificate a = kernel_spectral_check(k, 1, 200, 9);
  const CompletenessCertificate b = kernel_spectral_check(k, 1, 200, 9);
  EXPECT_EQ(a.checks[0].detail, b.checks[0].detail);
}

TEST(DiscriminationOracle, CompleteAndIncomplete) {
  const MeasurementOperator good(example_ensemble(5));
  EXPECT_TRUE(discrimination_oracle(good, 1, 200, 3).passed);
  // Trace alone cannot separate unit-trace states.
  const MeasurementOperator bad(custom_ensemble(3, 1, {HermitianMatrix::identity(3)}));
  const CompletenessCertificate c = discrimination_oracle(bad, 1, 50, 3);
  EXPECT_FALSE(c.passed);
  EXPECT_EQ(c.violations, 45);  // every tenth pair repeats X and is skipped
  EXPECT_THROW(discrimination_oracle(good, 0, 10, 1), std::invalid_argument);
}
