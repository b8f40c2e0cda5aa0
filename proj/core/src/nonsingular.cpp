#include "explift/nonsingular.hpp"

#include "explift/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace explift {

namespace {

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  // Exact for the ranges that fit in 64 bits; saturates otherwise.
  long double acc = 1.0L;
  for (int i = 1; i <= k; ++i) acc = acc * (n - k + i) / i;
  if (acc > static_cast<long double>(std::numeric_limits<std::uint64_t>::max())) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(std::llround(acc));
}

// Advances `idx` to the next s-combination of 0..n-1; false when exhausted.
bool next_combination(std::vector<int>& idx, int n) {
  const int s = static_cast<int>(idx.size());
  int i = s - 1;
  while (i >= 0 && idx[i] == n - s + i) --i;
  if (i < 0) return false;
  ++idx[i];
  for (int j = i + 1; j < s; ++j) idx[j] = idx[j - 1] + 1;
  return true;
}

std::vector<int> first_combination(int s) {
  std::vector<int> idx(s);
  for (int i = 0; i < s; ++i) idx[i] = i;
  return idx;
}

}  // namespace

std::string to_string(const MinorWitness& w) {
  std::ostringstream os;
  os << "rows {";
  for (std::size_t i = 0; i < w.rows.size(); ++i) os << (i ? "," : "") << w.rows[i];
  os << "} cols {";
  for (std::size_t i = 0; i < w.cols.size(); ++i) os << (i ? "," : "") << w.cols[i];
  os << "}";
  return os.str();
}

std::uint64_t minor_count(int p, int q) {
  std::uint64_t total = 0;
  for (int s = 1; s <= std::min(p, q); ++s) {
    const std::uint64_t a = binomial(p, s);
    const std::uint64_t b = binomial(q, s);
    if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    const std::uint64_t term = a * b;
    if (total > std::numeric_limits<std::uint64_t>::max() - term) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    total += term;
  }
  return total;
}

double bareiss_determinant(RealMatrix m) {
  const Eigen::Index n = m.rows();
  if (n != m.cols()) throw std::invalid_argument("bareiss_determinant: matrix not square");
  if (n == 0) return 1.0;
  double sign = 1.0;
  double prev = 1.0;
  for (Eigen::Index k = 0; k < n - 1; ++k) {
    // Largest available pivot keeps the divisions well scaled.
    Eigen::Index piv = k;
    for (Eigen::Index i = k + 1; i < n; ++i)
      if (std::abs(m(i, k)) > std::abs(m(piv, k))) piv = i;
    if (m(piv, k) == 0.0) return 0.0;
    if (piv != k) {
      m.row(k).swap(m.row(piv));
      sign = -sign;
    }
    for (Eigen::Index i = k + 1; i < n; ++i) {
      for (Eigen::Index j = k + 1; j < n; ++j) {
        m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
      }
    }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

TNSReport all_minors_nonzero(const RealMatrix& a, double tol) {
  const int p = static_cast<int>(a.rows());
  const int q = static_cast<int>(a.cols());
  if (p == 0 || q == 0) throw std::invalid_argument("all_minors_nonzero: empty matrix");
  const std::uint64_t total = minor_count(p, q);
  if (total > kMinorBudget) {
    throw BudgetExceeded("all_minors_nonzero: " + std::to_string(p) + "x" + std::to_string(q) +
                         " matrix has " + std::to_string(total) + " minors (budget " +
                         std::to_string(kMinorBudget) + ")");
  }

  TNSReport rep;
  rep.min_abs_minor = std::numeric_limits<double>::infinity();
  rep.min_raw_minor = std::numeric_limits<double>::infinity();
  RealMatrix sub;
  for (int s = 1; s <= std::min(p, q); ++s) {
    sub.resize(s, s);
    std::vector<int> rows = first_combination(s);
    do {
      std::vector<int> cols = first_combination(s);
      do {
        double bound = 1.0;
        for (int i = 0; i < s; ++i) {
          double row_sq = 0.0;
          for (int j = 0; j < s; ++j) {
            sub(i, j) = a(rows[i], cols[j]);
            row_sq += sub(i, j) * sub(i, j);
          }
          bound *= std::sqrt(row_sq);
        }
        const double det = std::abs(bareiss_determinant(sub));
        const double rel = bound > 0.0 ? det / bound : 0.0;
        ++rep.minors_checked;
        rep.min_raw_minor = std::min(rep.min_raw_minor, det);
        if (rel < rep.min_abs_minor) rep.min_abs_minor = rel;
        if (rel <= tol && !rep.witness) rep.witness = MinorWitness{rows, cols};
      } while (next_combination(cols, q));
    } while (next_combination(rows, p));
  }
  rep.is_tns = !rep.witness.has_value();
  return rep;
}

RealMatrix tns_complement(const RealMatrix& a, std::uint64_t seed, int max_retries) {
  const int p = static_cast<int>(a.rows());
  const int q = static_cast<int>(a.cols());
  if (q < 1 || q >= p) {
    throw std::invalid_argument("tns_complement: need 1 <= q < p, got " + std::to_string(p) +
                                "x" + std::to_string(q));
  }
  if (max_retries < 1) throw std::invalid_argument("tns_complement: max_retries must be >= 1");
  if (!a.allFinite()) throw std::invalid_argument("tns_complement: non-finite input");

  Eigen::JacobiSVD<RealMatrix> svd(a, Eigen::ComputeFullU);
  const RealVector& sv = svd.singularValues();
  if (!(sv(q - 1) > 1e-12 * sv(0))) {
    throw std::invalid_argument("tns_complement: input does not have full column rank");
  }
  const RealMatrix null_basis = svd.matrixU().rightCols(p - q);
  const double scale = std::max(1.0, a.norm());

  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  MinorWitness last;
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    RealMatrix c(p - q, p - q);
    for (Eigen::Index j = 0; j < c.cols(); ++j)
      for (Eigen::Index i = 0; i < c.rows(); ++i) c(i, j) = coef(gen);
    RealMatrix b = null_basis * c;
    bool degenerate = false;
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      const double nrm = b.col(j).norm();
      if (nrm == 0.0) {
        degenerate = true;
        break;
      }
      b.col(j) /= nrm;
    }
    if (degenerate) continue;
    if ((a.transpose() * b).cwiseAbs().maxCoeff() > 1e-10 * scale) continue;
    const TNSReport rep = all_minors_nonzero(b);
    if (rep.is_tns) return b;
    last = *rep.witness;
  }
  throw ComplementError("tns_complement: no totally non-singular complement after " +
                            std::to_string(max_retries) + " draws; last vanishing minor " +
                            to_string(last),
                        last);
}

}  // namespace explift
