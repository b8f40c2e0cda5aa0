#include "explift/frames.hpp"
#include "explift/nonsingular.hpp"
#include "explift/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace explift;

namespace {

// Laplace expansion along the first row.
double cofactor_det(const RealMatrix& a) {
  const Eigen::Index n = a.rows();
  if (n == 1) return a(0, 0);
  double det = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    RealMatrix minor(n - 1, n - 1);
    for (Eigen::Index r = 1; r < n; ++r)
      for (Eigen::Index c = 0, cc = 0; c < n; ++c)
        if (c != j) minor(r - 1, cc++) = a(r, c);
    det += (j % 2 ? -1.0 : 1.0) * a(0, j) * cofactor_det(minor);
  }
  return det;
}

std::uint64_t brute_minor_count(int p, int q) {
  // Number of (row subset, column subset) pairs of equal nonzero size.
  std::uint64_t total = 0;
  for (int rows = 1; rows < (1 << p); ++rows)
    for (int cols = 1; cols < (1 << q); ++cols)
      if (__builtin_popcount(rows) == __builtin_popcount(cols)) ++total;
  return total;
}

}  // namespace

TEST(Bareiss, MatchesCofactorExpansion) {
  Rng rng = make_stream(11, {});
  std::normal_distribution<double> g;
  for (int n = 1; n <= 6; ++n) {
    for (int t = 0; t < 10; ++t) {
      RealMatrix a(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = g(rng);
      const double ref = cofactor_det(a);
      EXPECT_NEAR(bareiss_determinant(a), ref, 1e-10 * (1.0 + std::abs(ref)));
    }
  }
  RealMatrix singular(3, 3);
  singular << 1, 2, 3, 2, 4, 6, 0, 1, 1;
  EXPECT_NEAR(bareiss_determinant(singular), 0.0, 1e-14);
  RealMatrix needs_pivot(2, 2);
  needs_pivot << 0, 1, 1, 0;
  EXPECT_DOUBLE_EQ(bareiss_determinant(needs_pivot), -1.0);
  EXPECT_THROW(bareiss_determinant(RealMatrix(2, 3)), std::invalid_argument);
}

TEST(MinorCount, MatchesSubsetEnumeration) {
  for (int p = 1; p <= 6; ++p)
    for (int q = 1; q <= 6; ++q) EXPECT_EQ(minor_count(p, q), brute_minor_count(p, q)) << p << "x" << q;
  EXPECT_EQ(minor_count(200, 200), std::numeric_limits<std::uint64_t>::max());
}

TEST(AllMinors, VandermondeIsTotallyNonSingular) {
  const RealMatrix v = vandermonde_block(6, NodeList({0.3, 0.7, 1.5}));
  const TNSReport rep = all_minors_nonzero(v);
  EXPECT_TRUE(rep.is_tns);
  EXPECT_EQ(rep.minors_checked, minor_count(6, 3));
  EXPECT_GT(rep.min_abs_minor, 0.0);
  EXPECT_LE(rep.min_abs_minor, 1.0);
}

TEST(AllMinors, ReportsFirstVanishingMinor) {
  RealMatrix a(3, 2);
  a << 1, 2, 2, 4, 1, 3;  // rows 0 and 1 are proportional
  const TNSReport rep = all_minors_nonzero(a);
  EXPECT_FALSE(rep.is_tns);
  ASSERT_TRUE(rep.witness.has_value());
  EXPECT_EQ(rep.witness->rows, (std::vector<int>{0, 1}));
  EXPECT_EQ(rep.witness->cols, (std::vector<int>{0, 1}));
  RealMatrix z = RealMatrix::Ones(2, 2);
  z(1, 0) = 0.0;
  const TNSReport rz = all_minors_nonzero(z);
  EXPECT_EQ(rz.witness->rows, (std::vector<int>{1}));
  EXPECT_EQ(rz.witness->cols, (std::vector<int>{0}));
}

TEST(AllMinors, BudgetIsEnforced) {
  EXPECT_THROW(all_minors_nonzero(RealMatrix::Ones(30, 15)), BudgetExceeded);
  EXPECT_THROW(all_minors_nonzero(RealMatrix(0, 0)), std::invalid_argument);
}

TEST(TnsComplement, ContractOnVandermondeInputs) {
  for (int p = 2; p <= 8; ++p) {
    for (int q = 1; q < p && q <= 3; ++q) {
      std::vector<double> xs;
      for (int l = 0; l < q; ++l) xs.push_back(0.4 + 0.5 * l);
      const RealMatrix a = vandermonde_block(p, NodeList(xs));
      const RealMatrix b = tns_complement(a, 1000 + p * 10 + q);
      ASSERT_EQ(b.rows(), p);
      ASSERT_EQ(b.cols(), p - q);
      EXPECT_LT((a.transpose() * b).cwiseAbs().maxCoeff(), 1e-10 * std::max(1.0, a.norm()));
      EXPECT_TRUE(all_minors_nonzero(b).is_tns);
      for (Eigen::Index j = 0; j < b.cols(); ++j) EXPECT_NEAR(b.col(j).norm(), 1.0, 1e-14);
      // Full rank: [A B] spans R^p.
      RealMatrix ab(p, p);
      ab << a, b;
      EXPECT_EQ(Eigen::FullPivLU<RealMatrix>(ab).rank(), p);
    }
  }
}

TEST(TnsComplement, DeterministicPerSeed) {
  const RealMatrix a = vandermonde_block(5, NodeList({0.5, 1.5}));
  EXPECT_EQ(tns_complement(a, 7), tns_complement(a, 7));
}

TEST(TnsComplement, RejectsBadInputs) {
  EXPECT_THROW(tns_complement(RealMatrix::Ones(3, 3), 1), std::invalid_argument);
  EXPECT_THROW(tns_complement(RealMatrix::Ones(4, 2), 1), std::invalid_argument);  // rank 1
  RealMatrix inf = RealMatrix::Ones(3, 1);
  inf(1, 0) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(tns_complement(inf, 1), std::invalid_argument);
}

TEST(TnsComplement, ImpossibleComplementExhaustsRetries) {
  // Every complement of (1,0,2) is a(2,0,-1) + b(0,1,0): rows 0 and 2 are
  // proportional, so the 2x2 minor on rows {0,2} always vanishes.
  RealMatrix a(3, 1);
  a << 1, 0, 2;
  try {
    (void)tns_complement(a, 1, 8);
    FAIL() << "expected ComplementError";
  } catch (const ComplementError& e) {
    EXPECT_EQ(e.witness.rows.size(), 2u);
  }
}

TEST(TnsComplement, HighOrderVandermondeBlocks) {
  // Totally positive, yet minors of A sit far below the certification tolerance.
  for (auto [p, q] : {std::pair{8, 6}, {8, 7}}) {
    std::vector<double> xs;
    for (int l = 0; l < q; ++l) xs.push_back(0.3 + 0.25 * l);
    const RealMatrix a = vandermonde_block(p, NodeList(xs));
    EXPECT_FALSE(all_minors_nonzero(a).is_tns);
    const RealMatrix b = tns_complement(a, 40 + p * 10 + q);
    EXPECT_LT((a.transpose() * b).cwiseAbs().maxCoeff(), 1e-10 * std::max(1.0, a.norm()));
    EXPECT_TRUE(all_minors_nonzero(b).is_tns);
  }
}

TEST(TnsComplement, RetryCountMustBePositive) {
  const RealMatrix a = vandermonde_block(4, NodeList({0.5}));
  EXPECT_THROW(tns_complement(a, 1, 0), std::invalid_argument);
}
