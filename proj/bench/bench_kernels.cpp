// Parallel gather kernels against the serial scatter reference.

#include <benchmark/benchmark.h>

#include <random>

#include "bhgl/exact.hpp"
#include "bhgl/fock.hpp"

using namespace bhgl;

namespace {

LatticeParams four_mode_params() { return {{0.3, 1.0, 0.4}, 0.01, {-1.3, 0.0, 0.0, 1.3}}; }

ComplexVector random_vector(std::size_t n) {
  std::mt19937 rng(7);
  std::normal_distribution<double> d;
  ComplexVector v(n);
  for (auto& c : v) c = Complex(d(rng), d(rng));
  return v;
}

void BM_HamiltonianParallel(benchmark::State& state) {
  const HubbardKernel k{FockBasis(static_cast<int>(state.range(0)), 4)};
  const auto in = random_vector(k.size());
  ComplexVector out(k.size());
  const auto p = four_mode_params();
  for (auto _ : state) {
    k.apply_hamiltonian(in, p, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(k.size()));
}

void BM_HamiltonianReference(benchmark::State& state) {
  const FockBasis basis(static_cast<int>(state.range(0)), 4);
  const auto in = random_vector(basis.size());
  ComplexVector out(basis.size());
  const auto p = four_mode_params();
  for (auto _ : state) {
    reference::apply_hamiltonian(basis, in, p, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(basis.size()));
}

void BM_PairParallel(benchmark::State& state) {
  const HubbardKernel k{FockBasis(static_cast<int>(state.range(0)), 4)};
  const auto in = random_vector(k.size());
  ComplexVector out(k.size());
  for (auto _ : state) {
    k.apply_pair(in, 1, 2, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(k.size()));
}

void BM_PairReference(benchmark::State& state) {
  const FockBasis basis(static_cast<int>(state.range(0)), 4);
  const auto in = random_vector(basis.size());
  ComplexVector out(basis.size());
  for (auto _ : state) {
    reference::apply_pair(basis, in, 1, 2, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(basis.size()));
}

void BM_Inner(benchmark::State& state) {
  const auto a = random_vector(static_cast<std::size_t>(state.range(0)));
  const auto b = random_vector(a.size());
  for (auto _ : state) benchmark::DoNotOptimize(inner(a, b));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_HamiltonianParallel)->Arg(22)->Arg(60)->Arg(110)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HamiltonianReference)->Arg(22)->Arg(60)->Arg(110)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PairParallel)->Arg(22)->Arg(60)->Arg(110)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PairReference)->Arg(22)->Arg(60)->Arg(110)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Inner)->Arg(1 << 20)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
