#include "explift/completeness.hpp"

#include "explift/nonsingular.hpp"
#include "explift/parallel.hpp"
#include "explift/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace explift {

namespace {

constexpr double kMatchTol = 1e-12;
constexpr double kSpanTol = 1e-8;

double max_entry_diff(const HermitianMatrix& a, const HermitianMatrix& b) {
  return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

// Rebuilds the operator list implied by the recipe parameters.
std::vector<HermitianMatrix> rebuild(const MeasurementEnsemble& e) {
  switch (e.recipe.kind) {
    case Recipe::thm1:
      return thm1_ensemble(e.n, NodeList(e.recipe.nodes), e.recipe.phase).matrices;
    case Recipe::thm2:
      return thm2_ensemble(e.n, e.r, NodeList(e.recipe.nodes), e.recipe.normalized).matrices;
    case Recipe::thm3:
    case Recipe::example: {
      std::vector<HermitianMatrix> out = c_basis(e.n, e.r);
      for (const AntidiagBlock& b : e.recipe.blocks) {
        for (Eigen::Index l = 0; l < b.real_coeffs.cols(); ++l) {
          HermitianMatrix re = antidiag_include(e.n, b.k, RealVector(b.real_coeffs.col(l)));
          HermitianMatrix im = antidiag_include(
              e.n, b.k, ComplexVector(Complex(0.0, 1.0) * b.imag_coeffs.col(l).cast<Complex>()));
          if (e.recipe.imag_first) std::swap(re, im);
          out.push_back(std::move(re));
          out.push_back(std::move(im));
        }
      }
      return out;
    }
    case Recipe::custom: break;
  }
  return {};
}

struct CheckList {
  std::vector<CheckRecord> records;
  bool ok = true;
  void add(std::string name, bool passed, std::string detail) {
    ok = ok && passed;
    records.push_back({std::move(name), passed, std::move(detail)});
  }
};

}  // namespace

std::string level_name(CertLevel l) {
  switch (l) {
    case CertLevel::structural: return "structural";
    case CertLevel::sampled: return "sampled";
    case CertLevel::oracle: return "oracle";
  }
  return "unknown";
}

const CheckRecord* CompletenessCertificate::first_failure() const {
  for (const CheckRecord& c : checks)
    if (!c.passed) return &c;
  return nullptr;
}

CompletenessCertificate certify_structural(const MeasurementEnsemble& e) {
  CompletenessCertificate cert;
  cert.level = CertLevel::structural;
  cert.r = e.r;
  CheckList cl;
  auto finish = [&]() {
    cert.checks = std::move(cl.records);
    cert.passed = cl.ok;
    return cert;
  };

  if (e.recipe.kind == Recipe::custom) {
    cl.add("recipe", false, "custom ensembles carry no block structure to certify");
    return finish();
  }
  cl.add("recipe", true, recipe_name(e.recipe.kind));

  const int n = e.n;
  const int r = e.r;
  if (n < 3 || r < 1 || r > max_rank(n)) {
    cl.add("rank", false, "r=" + std::to_string(r) + " outside 1.." + std::to_string(max_rank(n)));
    return finish();
  }
  cl.add("rank", true, "r=" + std::to_string(r) + ", n=" + std::to_string(n));

  const int expected = block_count(n, r);
  const int actual = static_cast<int>(e.matrices.size());
  cl.add("count", actual == expected,
         std::to_string(actual) + " operators, expected " + std::to_string(expected));
  if (actual != expected) return finish();

  // Recipe parameters must reproduce the stored operators.
  std::vector<HermitianMatrix> expected_ops;
  try {
    expected_ops = rebuild(e);
  } catch (const std::exception& ex) {
    cl.add("parameters", false, ex.what());
    return finish();
  }
  {
    double worst = 0.0;
    int worst_idx = -1;
    bool dims_ok = expected_ops.size() == e.matrices.size();
    for (std::size_t i = 0; dims_ok && i < e.matrices.size(); ++i) {
      if (e.matrices[i].dim() != n) {
        dims_ok = false;
        break;
      }
      const double d = max_entry_diff(e.matrices[i], expected_ops[i]);
      if (d > worst) {
        worst = d;
        worst_idx = static_cast<int>(i);
      }
    }
    const bool ok = dims_ok && worst <= kMatchTol;
    std::ostringstream os;
    if (!dims_ok) {
      os << "operator list does not match the recipe layout";
    } else {
      os << "max entry deviation " << worst;
      if (!ok) os << " at operator " << worst_idx;
    }
    cl.add("operators_match_recipe", ok, os.str());
  }

  if (e.recipe.kind == Recipe::thm1) {
    // Vandermonde in distinct nonzero nodes is invertible, so span(G) equals
    // the span of the diagonal projectors and X_k, Y_k.
    const double phi = e.recipe.phase.value_or(std::numbers::pi / (2.0 * n));
    cl.add("phase", phase_is_valid(n, phi), "phase " + std::to_string(phi));
    const RealMatrix g = coord_columns(e.matrices, n);
    const RealMatrix h = coord_columns(cos_sin_family(n, e.recipe.phase), n);
    const double r1 = containment_residual(g, h);
    const double r2 = containment_residual(h, g);
    const int rg = numeric_rank(g);
    const int rh = numeric_rank(h);
    std::ostringstream os;
    os << "rank " << rg << " vs " << rh << ", containment residuals " << r1 << ", " << r2;
    cl.add("span_equivalence", rg == rh && r1 <= kSpanTol && r2 <= kSpanTol, os.str());
  } else {
    // G_0 must be a basis of the complement subspace C_r^n.
    const int c_dim = c_basis_dim(n, r);
    const auto [lo, hi] = block_range(n, r);
    bool supported = true;
    for (int i = 0; i < c_dim && supported; ++i) {
      const HermitianMatrix& g = e.matrices[i];
      for (int j = 0; j < n && supported; ++j)
        for (int l = 0; l < n; ++l)
          if (j != l && j + l >= lo && j + l <= hi && std::abs(g(j, l)) > kMatchTol) {
            supported = false;
            break;
          }
    }
    const std::vector<HermitianMatrix> g0(e.matrices.begin(), e.matrices.begin() + c_dim);
    const int rank = numeric_rank(coord_columns(g0, n));
    cl.add("g0_basis", supported && rank == c_dim,
           std::string(supported ? "supported on C_r^n" : "leaves C_r^n") + ", rank " +
               std::to_string(rank) + " of " + std::to_string(c_dim));
  }

  for (const AntidiagBlock& b : coefficient_blocks(e)) {
    for (int part = 0; part < 2; ++part) {
      const RealMatrix& a = part == 0 ? b.real_coeffs : b.imag_coeffs;
      const std::string name =
          "tns_k" + std::to_string(b.k) + (part == 0 ? "_real" : "_imag");
      try {
        const TNSReport rep = all_minors_nonzero(a);
        std::ostringstream os;
        os << rep.minors_checked << " minors, min relative |minor| " << rep.min_abs_minor;
        if (!rep.is_tns) os << ", vanishing at " << to_string(*rep.witness);
        cl.add(name, rep.is_tns, os.str());
      } catch (const BudgetExceeded& ex) {
        cl.add(name, false, ex.what());
      }
    }
  }

  const MeasurementOperator op(e);
  cl.add("linear_independence", op.injective_on_span(),
         "numeric rank " + std::to_string(op.numeric_rank()) + " of " + std::to_string(op.m()));
  cert.note = "r-completeness follows from the verified block-construction hypotheses";
  return finish();
}

CompletenessCertificate kernel_spectral_check(const KernelBasis& kernel, int r, std::int64_t trials,
                                              std::uint64_t seed, double tol) {
  if (trials < 1) throw std::invalid_argument("kernel_spectral_check: trials must be >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("kernel_spectral_check: tol must be positive");
  CompletenessCertificate cert;
  cert.level = CertLevel::sampled;
  cert.r = r;
  cert.tol = tol;
  if (kernel.empty()) {
    cert.passed = true;
    cert.note = "empty kernel: condition holds vacuously";
    cert.checks.push_back({"kernel_sampling", true, "kernel is {0}"});
    return cert;
  }

  const int n = kernel.n;
  const RealMatrix basis = coord_columns(kernel.elements, n);
  const auto counts = parallel_map(static_cast<std::size_t>(trials), [&](std::size_t t) {
    Rng rng = make_stream(seed, {static_cast<std::uint64_t>(t)});
    const RealVector c = gaussian_vector(static_cast<int>(basis.cols()), rng);
    RealVector z = basis * c;
    z /= z.norm();
    return signed_eig_counts(from_coords(n, z), tol);
  });

  cert.trials = trials;
  cert.min_positive = n;
  cert.min_negative = n;
  std::int64_t first_bad = -1;
  for (std::size_t t = 0; t < counts.size(); ++t) {
    cert.min_positive = std::min(cert.min_positive, counts[t].positives);
    cert.min_negative = std::min(cert.min_negative, counts[t].negatives);
    if (counts[t].positives < r + 1 || counts[t].negatives < r + 1) {
      ++cert.violations;
      if (first_bad < 0) first_bad = static_cast<std::int64_t>(t);
    }
  }
  cert.passed = cert.violations == 0;
  std::ostringstream os;
  os << trials << " samples, min positive " << cert.min_positive << ", min negative "
     << cert.min_negative << ", need " << r + 1;
  if (first_bad >= 0) {
    os << "; first violation at sample " << first_bad << " ("
       << counts[first_bad].positives << "+/" << counts[first_bad].negatives << "-)";
  }
  cert.checks.push_back({"kernel_sampling", cert.passed, os.str()});
  cert.note = "sampling corroborates the eigenvalue-sign criterion; it does not certify it";
  return cert;
}

CompletenessCertificate discrimination_oracle(const MeasurementOperator& m, int r,
                                              std::int64_t trials, std::uint64_t seed, double tol) {
  if (trials < 1) throw std::invalid_argument("discrimination_oracle: trials must be >= 1");
  if (r < 1 || r > m.n()) throw std::invalid_argument("discrimination_oracle: rank out of range");
  const int n = m.n();

  struct Outcome {
    bool compared = false;
    bool violation = false;
  };
  const auto outcomes = parallel_map(static_cast<std::size_t>(trials), [&](std::size_t t) {
    Rng rng = make_stream(seed, {static_cast<std::uint64_t>(t)});
    std::uniform_int_distribution<int> low_rank(1, r);
    std::uniform_int_distribution<int> any_rank(1, n);
    const HermitianMatrix x = random_psd(n, low_rank(rng), rng);
    // Every tenth pair repeats X to exercise the distance guard.
    const HermitianMatrix xp = t % 10 == 9 ? x : random_psd(n, any_rank(rng), rng);
    Outcome o;
    if ((x - xp).frobenius_norm() <= tol) return o;
    o.compared = true;
    o.violation = (m.apply(x) - m.apply(xp)).norm() <= tol;
    return o;
  });

  CompletenessCertificate cert;
  cert.level = CertLevel::oracle;
  cert.r = r;
  cert.tol = tol;
  cert.trials = trials;
  std::int64_t compared = 0;
  for (const Outcome& o : outcomes) {
    compared += o.compared;
    cert.violations += o.violation;
  }
  cert.passed = cert.violations == 0;
  cert.checks.push_back({"discrimination", cert.passed,
                         std::to_string(compared) + " distinct pairs compared, " +
                             std::to_string(cert.violations) + " indistinguishable"});
  cert.note = "random-pair oracle; absence of violations is evidence, not proof";
  return cert;
}

}  // namespace explift
