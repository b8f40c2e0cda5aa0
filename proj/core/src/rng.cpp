#include "explift/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace explift {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_key(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = mix64(seed);
  for (std::uint64_t k : keys) h = mix64(h ^ mix64(k + 0x632be59bd9b4e019ULL));
  return h;
}

Rng make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
  return Rng(stream_key(seed, keys));
}

ComplexVector random_unit_vector(int n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("random_unit_vector: n must be positive");
  std::normal_distribution<double> g;
  ComplexVector x(n);
  double nrm = 0.0;
  do {
    for (int i = 0; i < n; ++i) x(i) = Complex(g(rng), g(rng));
    nrm = x.norm();
  } while (nrm == 0.0);
  return x / nrm;
}

HermitianMatrix random_psd(int n, int rank, Rng& rng, bool trace_normalize) {
  if (rank < 0 || rank > n) throw std::invalid_argument("random_psd: rank out of range");
  if (rank == 0) return HermitianMatrix(n);
  std::normal_distribution<double> g;
  ComplexMatrix v(n, rank);
  for (int j = 0; j < rank; ++j)
    for (int i = 0; i < n; ++i) v(i, j) = Complex(g(rng), g(rng)) / std::sqrt(2.0);
  HermitianMatrix x = make_hermitian_unchecked(v * v.adjoint());
  if (trace_normalize) x *= 1.0 / x.trace();
  return x;
}

RealVector gaussian_vector(int m, Rng& rng) {
  std::normal_distribution<double> g;
  RealVector v(m);
  for (int i = 0; i < m; ++i) v(i) = g(rng);
  return v;
}

RealVector uniform_ball(int m, double radius, Rng& rng) {
  if (m < 1) throw std::invalid_argument("uniform_ball: dimension must be positive");
  RealVector d;
  double nrm = 0.0;
  do {
    d = gaussian_vector(m, rng);
    nrm = d.norm();
  } while (nrm == 0.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double rad = radius * std::pow(u(rng), 1.0 / m);
  return d * (rad / nrm);
}

}  // namespace explift
