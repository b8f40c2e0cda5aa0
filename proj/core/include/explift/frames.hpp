#pragma once

#include "explift/hermitian.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace explift {

// Strictly increasing list of nonzero reals.
class NodeList {
 public:
  NodeList() = default;
  // Throws std::invalid_argument on zero entries or non-increasing order.
  explicit NodeList(std::vector<double> xs);

  const std::vector<double>& values() const { return xs_; }
  std::size_t size() const { return xs_.size(); }
  double operator[](std::size_t i) const { return xs_[i]; }
  bool all_positive() const;

 private:
  std::vector<double> xs_;
};

enum class Recipe { thm1, thm2, thm3, example, custom };

std::string recipe_name(Recipe r);
Recipe recipe_from_name(const std::string& name);

// Coefficients of the operators living on antidiagonal k. Column l yields the
// operators i_k(real_coeffs[:, l]) and i_k(i * imag_coeffs[:, l]).
struct AntidiagBlock {
  int k = 0;
  RealMatrix real_coeffs;  // antidiag_length(n, k) x r
  RealMatrix imag_coeffs;
};

struct RecipeParams {
  Recipe kind = Recipe::custom;
  std::vector<double> nodes;            // thm1, thm2
  std::optional<double> phase;          // thm1
  bool normalized = false;              // thm2: operators scaled to unit Frobenius norm
  bool imag_first = false;              // operator order within each block column
  std::vector<AntidiagBlock> blocks;    // thm2, thm3, example
};

struct MeasurementEnsemble {
  int n = 0;
  int r = 0;
  RecipeParams recipe;
  std::vector<HermitianMatrix> matrices;

  std::size_t size() const { return matrices.size(); }
};

// Expected operator counts.
int thm1_count(int n);               // 5n - 6
int block_count(int n, int r);       // 4r(n - r) + n - 2r
int c_basis_dim(int n, int r);       // n + 4r(r - 1)
int max_rank(int n);                 // ceil(n/2) - 1

// Component j is x^j exp(i j phase), j = 0..n-1; phase defaults to pi/(2n).
ComplexVector phase_vector(int n, double x, std::optional<double> phase = std::nullopt);

// Phases with j*phase a multiple of pi/2 for some j in 1..n-1 are rejected.
bool phase_is_valid(int n, double phase);

// 2n-3 nodes (-1)^j rho^(j - (n-2)), j = 0..2n-4, sorted, with
// rho = 3.3^(1/(n-2)): alternating signs, magnitudes geometric from 1/3.3 to
// 3.3.
NodeList default_thm1_nodes(int n);

// k/(r+1), k = 1..r.
NodeList default_thm2_nodes(int r);

// Diagonal projectors, then v_k v_k^* / ||.||, conj(v_k) conj(v_k)^* / ||.||
// for each node.
MeasurementEnsemble thm1_ensemble(int n, const NodeList& nodes,
                                  std::optional<double> phase = std::nullopt);

// Orthonormal basis of the subspace vanishing off the diagonal on antidiagonals
// 2r-1..2(n-r)-1: diagonal units, then i_k(e_p), i_k(i e_p) for the remaining
// antidiagonals in ascending k.
std::vector<HermitianMatrix> c_basis(int n, int r);

// R_k(x) has x^p at the p-th upper position of antidiagonal k (mirrored);
// I_k(x) has i x^p there and the conjugate below.
std::pair<HermitianMatrix, HermitianMatrix> rk_ik(int n, int k, double x);

// Vandermonde coefficients (x_{l+1})^p, p < antidiag_length(n,k), l < r.
RealMatrix vandermonde_block(int rows, const NodeList& nodes);

// c_basis followed by I_k(x_1), R_k(x_1), ..., I_k(x_r), R_k(x_r) for each
// k = 2r-1..2(n-r)-1. Requires strictly positive nodes. With `normalized`,
// every operator is scaled to unit Frobenius norm.
MeasurementEnsemble thm2_ensemble(int n, int r, const NodeList& nodes, bool normalized = false);

// c_basis followed by i_k(A_k[0]), i_k(i A'_k[0]), ... per antidiagonal. Every
// coefficient block must be totally non-singular; violations throw
// std::invalid_argument naming the antidiagonal and the vanishing minor.
MeasurementEnsemble thm3_ensemble(int n, int r, const std::vector<AntidiagBlock>& blocks);

// X_k has cos((j-l) phase) on antidiagonal k, Y_k has i sin((j-l) phase);
// phase defaults to pi/(2n).
std::pair<HermitianMatrix, HermitianMatrix> cos_sin_matrices(
    int n, int k, std::optional<double> phase = std::nullopt);

// Coefficient blocks (r = 1) of the off-diagonal parts of X_k, Y_k, i.e. the
// vectors u_k, w_k with i_k(u_k) = X_k - diagonal, i_k(i w_k) = Y_k.
std::vector<AntidiagBlock> cos_sin_blocks(int n, std::optional<double> phase = std::nullopt);

// Diagonal projectors followed by X_k, Y_k for k = 1..2n-3. Spans the same
// subspace as thm1_ensemble for any valid node list.
std::vector<HermitianMatrix> cos_sin_family(int n, std::optional<double> phase = std::nullopt);

// Rank-one construction with w_k = v_k = sqrt(2) (1,...,1): diagonal
// projectors, then i_k(v_k), i_k(i w_k) for k = 1..2n-3.
MeasurementEnsemble example_ensemble(int n);
MeasurementEnsemble example_n4();

MeasurementEnsemble custom_ensemble(int n, int r, std::vector<HermitianMatrix> matrices);

// Coefficient blocks behind a block-structured ensemble: the stored blocks for
// thm2/thm3/example, the cos/sin blocks of the span-equivalent family for thm1.
// Empty for custom ensembles.
std::vector<AntidiagBlock> coefficient_blocks(const MeasurementEnsemble& e);

// First and last antidiagonal carrying measurement blocks: 2r-1 and 2(n-r)-1.
std::pair<int, int> block_range(int n, int r);

}  // namespace explift
