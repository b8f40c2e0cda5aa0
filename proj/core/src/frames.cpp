#include "explift/frames.hpp"

#include "explift/nonsingular.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace explift {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

void require_rank(int n, int r, const char* what) {
  require(n >= 3, std::string(what) + ": n must be >= 3");
  require(r >= 1 && r <= max_rank(n),
          std::string(what) + ": rank r=" + std::to_string(r) + " outside 1.." +
              std::to_string(max_rank(n)) + " for n=" + std::to_string(n));
}

double default_phase(int n) { return std::numbers::pi / (2.0 * n); }

}  // namespace

NodeList::NodeList(std::vector<double> xs) : xs_(std::move(xs)) {
  for (std::size_t i = 0; i < xs_.size(); ++i) {
    require(std::isfinite(xs_[i]), "NodeList: non-finite node");
    require(xs_[i] != 0.0, "NodeList: node " + std::to_string(i) + " is zero");
    require(i == 0 || xs_[i - 1] < xs_[i], "NodeList: nodes must be strictly increasing");
  }
}

bool NodeList::all_positive() const {
  return std::all_of(xs_.begin(), xs_.end(), [](double x) { return x > 0.0; });
}

std::string recipe_name(Recipe r) {
  switch (r) {
    case Recipe::thm1: return "thm1";
    case Recipe::thm2: return "thm2";
    case Recipe::thm3: return "thm3";
    case Recipe::example: return "example";
    case Recipe::custom: return "custom";
  }
  return "custom";
}

Recipe recipe_from_name(const std::string& name) {
  if (name == "thm1") return Recipe::thm1;
  if (name == "thm2") return Recipe::thm2;
  if (name == "thm3") return Recipe::thm3;
  if (name == "example" || name == "example_n4") return Recipe::example;
  if (name == "custom") return Recipe::custom;
  throw std::invalid_argument("unknown recipe '" + name + "'");
}

int thm1_count(int n) { return 5 * n - 6; }
int block_count(int n, int r) { return 4 * r * (n - r) + n - 2 * r; }
int c_basis_dim(int n, int r) { return n + 4 * r * (r - 1); }
int max_rank(int n) { return (n + 1) / 2 - 1; }

std::pair<int, int> block_range(int n, int r) { return {2 * r - 1, 2 * (n - r) - 1}; }

bool phase_is_valid(int n, double phase) {
  if (!std::isfinite(phase)) return false;
  const double quarter = std::numbers::pi / 2.0;
  for (int j = 1; j < n; ++j) {
    const double t = j * phase / quarter;
    if (std::abs(t - std::round(t)) < 1e-12) return false;
  }
  return true;
}

ComplexVector phase_vector(int n, double x, std::optional<double> phase) {
  require(n >= 1, "phase_vector: n must be positive");
  require(x != 0.0 && std::isfinite(x), "phase_vector: node must be finite and nonzero");
  const double phi = phase.value_or(default_phase(n));
  ComplexVector v(n);
  for (int j = 0; j < n; ++j) v(j) = std::pow(x, j) * std::polar(1.0, j * phi);
  return v;
}

NodeList default_thm1_nodes(int n) {
  require(n >= 3, "default_thm1_nodes: n must be >= 3");
  constexpr double kSpread = 3.3;
  const double rho = std::pow(kSpread, 1.0 / (n - 2));
  std::vector<double> pts(2 * n - 3);
  for (int j = 0; j < 2 * n - 3; ++j) pts[j] = (j % 2 ? -1.0 : 1.0) * std::pow(rho, j - (n - 2));
  std::sort(pts.begin(), pts.end());
  return NodeList(std::move(pts));
}

NodeList default_thm2_nodes(int r) {
  require(r >= 1, "default_thm2_nodes: r must be positive");
  std::vector<double> xs(r);
  for (int k = 1; k <= r; ++k) xs[k - 1] = static_cast<double>(k) / (r + 1);
  return NodeList(std::move(xs));
}

MeasurementEnsemble thm1_ensemble(int n, const NodeList& nodes, std::optional<double> phase) {
  require(n >= 3, "thm1_ensemble: n must be >= 3");
  require(static_cast<int>(nodes.size()) == 2 * n - 3,
          "thm1_ensemble: expected " + std::to_string(2 * n - 3) + " nodes, got " +
              std::to_string(nodes.size()));
  if (phase) require(phase_is_valid(n, *phase), "thm1_ensemble: phase hits a multiple of pi/2");

  MeasurementEnsemble e;
  e.n = n;
  e.r = 1;
  e.recipe.kind = Recipe::thm1;
  e.recipe.nodes = nodes.values();
  e.recipe.phase = phase;
  e.matrices.reserve(thm1_count(n));
  for (int i = 0; i < n; ++i) e.matrices.push_back(HermitianMatrix::unit_projector(n, i));
  for (double x : nodes.values()) {
    const ComplexVector v = phase_vector(n, x, phase);
    const double nrm = v.squaredNorm();  // ||v v^*||_2 = ||v||^2
    e.matrices.push_back(HermitianMatrix::outer(v) * (1.0 / nrm));
    e.matrices.push_back(HermitianMatrix::outer(v.conjugate()) * (1.0 / nrm));
  }
  return e;
}

std::vector<HermitianMatrix> c_basis(int n, int r) {
  require_rank(n, r, "c_basis");
  std::vector<HermitianMatrix> out;
  out.reserve(c_basis_dim(n, r));
  for (int i = 0; i < n; ++i) out.push_back(HermitianMatrix::unit_projector(n, i));
  const auto [lo, hi] = block_range(n, r);
  for (int k = 1; k <= 2 * n - 3; ++k) {
    if (k >= lo && k <= hi) continue;
    const int len = antidiag_length(n, k);
    for (int p = 0; p < len; ++p) {
      ComplexVector e = ComplexVector::Zero(len);
      e(p) = 1.0;
      out.push_back(antidiag_include(n, k, e));
      e(p) = Complex(0.0, 1.0);
      out.push_back(antidiag_include(n, k, e));
    }
  }
  return out;
}

std::pair<HermitianMatrix, HermitianMatrix> rk_ik(int n, int k, double x) {
  require(x != 0.0 && std::isfinite(x), "rk_ik: x must be finite and nonzero");
  const int len = antidiag_length(n, k);
  ComplexVector c(len);
  for (int p = 0; p < len; ++p) c(p) = std::sqrt(2.0) * std::pow(x, p);
  return {antidiag_include(n, k, c), antidiag_include(n, k, ComplexVector(Complex(0.0, 1.0) * c))};
}

RealMatrix vandermonde_block(int rows, const NodeList& nodes) {
  RealMatrix v(rows, static_cast<Eigen::Index>(nodes.size()));
  for (std::size_t l = 0; l < nodes.size(); ++l)
    for (int p = 0; p < rows; ++p) v(p, static_cast<Eigen::Index>(l)) = std::pow(nodes[l], p);
  return v;
}

namespace {

// Appends the operators of one block in the requested order.
void emit_block(int n, const AntidiagBlock& b, bool imag_first, std::vector<HermitianMatrix>& out) {
  for (Eigen::Index l = 0; l < b.real_coeffs.cols(); ++l) {
    HermitianMatrix re = antidiag_include(n, b.k, RealVector(b.real_coeffs.col(l)));
    HermitianMatrix im =
        antidiag_include(n, b.k, ComplexVector(Complex(0.0, 1.0) * b.imag_coeffs.col(l).cast<Complex>()));
    if (imag_first) {
      out.push_back(std::move(im));
      out.push_back(std::move(re));
    } else {
      out.push_back(std::move(re));
      out.push_back(std::move(im));
    }
  }
}

void check_block_shapes(int n, int r, const std::vector<AntidiagBlock>& blocks, const char* what) {
  const auto [lo, hi] = block_range(n, r);
  require(static_cast<int>(blocks.size()) == hi - lo + 1,
          std::string(what) + ": expected " + std::to_string(hi - lo + 1) + " blocks, got " +
              std::to_string(blocks.size()));
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const AntidiagBlock& b = blocks[i];
    const int k = lo + static_cast<int>(i);
    require(b.k == k, std::string(what) + ": block " + std::to_string(i) + " has k=" +
                          std::to_string(b.k) + ", expected " + std::to_string(k));
    const int len = antidiag_length(n, k);
    require(b.real_coeffs.rows() == len && b.real_coeffs.cols() == r &&
                b.imag_coeffs.rows() == len && b.imag_coeffs.cols() == r,
            std::string(what) + ": block k=" + std::to_string(k) + " must be " +
                std::to_string(len) + "x" + std::to_string(r));
  }
}

}  // namespace

MeasurementEnsemble thm2_ensemble(int n, int r, const NodeList& nodes, bool normalized) {
  require_rank(n, r, "thm2_ensemble");
  require(static_cast<int>(nodes.size()) == r, "thm2_ensemble: expected " + std::to_string(r) +
                                                   " nodes, got " + std::to_string(nodes.size()));
  require(nodes.all_positive(), "thm2_ensemble: nodes must be strictly positive");

  MeasurementEnsemble e;
  e.n = n;
  e.r = r;
  e.recipe.kind = Recipe::thm2;
  e.recipe.nodes = nodes.values();
  e.recipe.normalized = normalized;
  e.recipe.imag_first = true;
  e.matrices = c_basis(n, r);
  const auto [lo, hi] = block_range(n, r);
  for (int k = lo; k <= hi; ++k) {
    AntidiagBlock b;
    b.k = k;
    b.real_coeffs = std::sqrt(2.0) * vandermonde_block(antidiag_length(n, k), nodes);
    if (normalized) b.real_coeffs.colwise().normalize();
    b.imag_coeffs = b.real_coeffs;
    emit_block(n, b, true, e.matrices);
    e.recipe.blocks.push_back(std::move(b));
  }
  return e;
}

MeasurementEnsemble thm3_ensemble(int n, int r, const std::vector<AntidiagBlock>& blocks) {
  require_rank(n, r, "thm3_ensemble");
  check_block_shapes(n, r, blocks, "thm3_ensemble");
  for (const AntidiagBlock& b : blocks) {
    for (int part = 0; part < 2; ++part) {
      const TNSReport rep = all_minors_nonzero(part == 0 ? b.real_coeffs : b.imag_coeffs);
      require(rep.is_tns, "thm3_ensemble: " + std::string(part == 0 ? "real" : "imaginary") +
                              " coefficients on antidiagonal " + std::to_string(b.k) +
                              " have a vanishing minor at " + to_string(*rep.witness));
    }
  }
  MeasurementEnsemble e;
  e.n = n;
  e.r = r;
  e.recipe.kind = Recipe::thm3;
  e.recipe.blocks = blocks;
  e.matrices = c_basis(n, r);
  for (const AntidiagBlock& b : blocks) emit_block(n, b, false, e.matrices);
  return e;
}

std::pair<HermitianMatrix, HermitianMatrix> cos_sin_matrices(int n, int k,
                                                            std::optional<double> phase) {
  require(n >= 2 && k >= 1 && k <= 2 * n - 3,
          "cos_sin_matrices: k=" + std::to_string(k) + " outside 1.." + std::to_string(2 * n - 3));
  const double phi = phase.value_or(default_phase(n));
  ComplexMatrix x = ComplexMatrix::Zero(n, n);
  ComplexMatrix y = ComplexMatrix::Zero(n, n);
  for (int j = std::max(0, k - (n - 1)); j <= std::min(k, n - 1); ++j) {
    const int l = k - j;
    x(j, l) = std::cos((j - l) * phi);
    y(j, l) = Complex(0.0, std::sin((j - l) * phi));
  }
  return {make_hermitian_unchecked(std::move(x)), make_hermitian_unchecked(std::move(y))};
}

std::vector<AntidiagBlock> cos_sin_blocks(int n, std::optional<double> phase) {
  const double phi = phase.value_or(default_phase(n));
  std::vector<AntidiagBlock> blocks;
  for (int k = 1; k <= 2 * n - 3; ++k) {
    const int len = antidiag_length(n, k);
    AntidiagBlock b;
    b.k = k;
    b.real_coeffs.resize(len, 1);
    b.imag_coeffs.resize(len, 1);
    for (int p = 0; p < len; ++p) {
      const int j = antidiag_row(n, k, p);
      const int l = k - j;
      b.real_coeffs(p, 0) = std::sqrt(2.0) * std::cos((j - l) * phi);
      b.imag_coeffs(p, 0) = std::sqrt(2.0) * std::sin((j - l) * phi);
    }
    blocks.push_back(std::move(b));
  }
  return blocks;
}

std::vector<HermitianMatrix> cos_sin_family(int n, std::optional<double> phase) {
  std::vector<HermitianMatrix> out;
  for (int i = 0; i < n; ++i) out.push_back(HermitianMatrix::unit_projector(n, i));
  for (int k = 1; k <= 2 * n - 3; ++k) {
    auto [x, y] = cos_sin_matrices(n, k, phase);
    out.push_back(std::move(x));
    out.push_back(std::move(y));
  }
  return out;
}

MeasurementEnsemble example_ensemble(int n) {
  require(n >= 3, "example_ensemble: n must be >= 3");
  std::vector<AntidiagBlock> blocks;
  for (int k = 1; k <= 2 * n - 3; ++k) {
    AntidiagBlock b;
    b.k = k;
    b.real_coeffs = RealMatrix::Constant(antidiag_length(n, k), 1, std::sqrt(2.0));
    b.imag_coeffs = b.real_coeffs;
    blocks.push_back(std::move(b));
  }
  MeasurementEnsemble e = thm3_ensemble(n, 1, blocks);
  e.recipe.kind = Recipe::example;
  return e;
}

MeasurementEnsemble example_n4() { return example_ensemble(4); }

MeasurementEnsemble custom_ensemble(int n, int r, std::vector<HermitianMatrix> matrices) {
  require(n >= 1, "custom_ensemble: n must be positive");
  for (const HermitianMatrix& g : matrices)
    require(g.dim() == n, "custom_ensemble: operator dimension differs from n");
  MeasurementEnsemble e;
  e.n = n;
  e.r = r;
  e.recipe.kind = Recipe::custom;
  e.matrices = std::move(matrices);
  return e;
}

std::vector<AntidiagBlock> coefficient_blocks(const MeasurementEnsemble& e) {
  switch (e.recipe.kind) {
    case Recipe::thm1: return cos_sin_blocks(e.n, e.recipe.phase);
    case Recipe::thm2:
    case Recipe::thm3:
    case Recipe::example: return e.recipe.blocks;
    case Recipe::custom: return {};
  }
  return {};
}

}  // namespace explift
