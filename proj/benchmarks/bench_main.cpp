#include "explift/frames.hpp"
#include "explift/hermitian.hpp"
#include "explift/measurement.hpp"
#include "explift/recovery.hpp"
#include "explift/rng.hpp"

#include <benchmark/benchmark.h>

using namespace explift;

namespace {

HermitianMatrix random_hermitian(int n, std::uint64_t seed) {
  Rng rng = make_stream(seed, {static_cast<std::uint64_t>(n)});
  return random_psd(n, n, rng) - random_psd(n, n, rng);
}

void bm_eig_ordered(benchmark::State& state) {
  const HermitianMatrix a = random_hermitian(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(eig_ordered(a));
}
BENCHMARK(bm_eig_ordered)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

void bm_psd_project(benchmark::State& state) {
  const HermitianMatrix a = random_hermitian(static_cast<int>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(psd_project(a));
}
BENCHMARK(bm_psd_project)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

void bm_apply(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const MeasurementOperator m(thm1_ensemble(n, default_thm1_nodes(n)));
  const HermitianMatrix x = random_hermitian(n, 3);
  for (auto _ : state) benchmark::DoNotOptimize(m.apply(x));
}
BENCHMARK(bm_apply)->Arg(8)->Arg(16)->Arg(32);

void bm_recover_noiseless(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const MeasurementOperator m(thm1_ensemble(n, default_thm1_nodes(n)));
  Rng rng = make_stream(4, {static_cast<std::uint64_t>(n)});
  const RealVector b = m.apply(HermitianMatrix::outer(random_unit_vector(n, rng)));
  for (auto _ : state) benchmark::DoNotOptimize(recover_noiseless(m, b));
}
BENCHMARK(bm_recover_noiseless)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void bm_recover_noisy(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const MeasurementOperator m(thm2_ensemble(n, 1, NodeList({1.0}), true));
  Rng rng = make_stream(5, {static_cast<std::uint64_t>(n)});
  RealVector b = m.apply(HermitianMatrix::outer(random_unit_vector(n, rng)));
  b += 1e-3 * RealVector::Random(b.size());
  for (auto _ : state) benchmark::DoNotOptimize(recover_noisy(m, b, default_noisy_options()));
}
BENCHMARK(bm_recover_noisy)->Arg(6)->Arg(12)->Arg(24)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
