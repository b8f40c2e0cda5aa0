#pragma once

#include "explift/hermitian.hpp"

#include <cstdint>
#include <initializer_list>
#include <random>

namespace explift {

using Rng = std::mt19937_64;

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

// Deterministic key for an independent stream identified by (seed, keys...).
// Streams depend only on the key, never on execution order.
std::uint64_t stream_key(std::uint64_t seed, std::initializer_list<std::uint64_t> keys);
Rng make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> keys);

// Haar-uniform point of the complex unit sphere (normalized complex Gaussian).
ComplexVector random_unit_vector(int n, Rng& rng);

// V V^* with V an n x rank matrix of standard complex Gaussians; optionally
// scaled to unit trace.
HermitianMatrix random_psd(int n, int rank, Rng& rng, bool trace_normalize = true);

// Uniform point in the Euclidean ball of the given radius in R^m: Gaussian
// direction scaled by radius * U^(1/m).
RealVector uniform_ball(int m, double radius, Rng& rng);

RealVector gaussian_vector(int m, Rng& rng);

}  // namespace explift
